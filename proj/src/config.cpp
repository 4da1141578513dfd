#include "prodimm/config.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "prodimm/catalog.hpp"
#include "prodimm/errors.hpp"
#include "prodimm/expr.hpp"

namespace prodimm {

namespace {

struct IniValue {
  std::string value;
  int line = 0;
  bool used = false;
};

struct IniFile {
  std::string path;
  std::map<std::string, std::map<std::string, IniValue>> sections;

  [[noreturn]] void fail(int line, const std::string& what) const {
    std::ostringstream os;
    os << path << ':' << line << ": " << what;
    throw ConfigError(os.str());
  }

  bool has(const std::string& sec, const std::string& key) const {
    auto s = sections.find(sec);
    return s != sections.end() && s->second.count(key) > 0;
  }

  const IniValue* get(const std::string& sec, const std::string& key) {
    auto s = sections.find(sec);
    if (s == sections.end()) return nullptr;
    auto k = s->second.find(key);
    if (k == s->second.end()) return nullptr;
    k->second.used = true;
    return &k->second;
  }

  std::string require(const std::string& sec, const std::string& key) {
    const IniValue* v = get(sec, key);
    if (!v) throw ConfigError(path + ": missing required key [" + sec + "] " + key);
    return v->value;
  }

  void reject_unused() const {
    for (const auto& [sec, keys] : sections)
      for (const auto& [key, v] : keys)
        if (!v.used) fail(v.line, "unknown key '" + key + "' in section [" + sec + "]");
  }
};

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

IniFile parse_ini(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  IniFile ini;
  ini.path = path;
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::string t = trim(line);
    if (t.empty()) continue;
    if (t.front() == '[') {
      if (t.back() != ']') ini.fail(lineno, "unterminated section header");
      section = trim(t.substr(1, t.size() - 2));
      static const char* known[] = {"target", "immersion", "grid", "checks", "output"};
      if (std::find(std::begin(known), std::end(known), section) == std::end(known))
        ini.fail(lineno, "unknown section [" + section + "]");
      continue;
    }
    if (section.empty()) ini.fail(lineno, "key before any [section]");
    size_t eq = t.find('=');
    if (eq == std::string::npos) ini.fail(lineno, "expected key = value");
    std::string key = trim(t.substr(0, eq));
    std::string val = trim(t.substr(eq + 1));
    if (key.empty()) ini.fail(lineno, "empty key");
    if (ini.sections[section].count(key))
      ini.fail(lineno, "duplicate key '" + key + "'");
    ini.sections[section][key] = {val, lineno, false};
  }
  return ini;
}

double parse_double(const IniFile& ini, const IniValue& v, const std::string& what) {
  char* end = nullptr;
  double x = std::strtod(v.value.c_str(), &end);
  if (end == v.value.c_str() || *end != '\0')
    ini.fail(v.line, what + ": malformed number '" + v.value + "'");
  return x;
}

long parse_int(const IniFile& ini, const IniValue& v, const std::string& what) {
  char* end = nullptr;
  long x = std::strtol(v.value.c_str(), &end, 10);
  if (end == v.value.c_str() || *end != '\0')
    ini.fail(v.line, what + ": malformed integer '" + v.value + "'");
  return x;
}

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  size_t start = 0;
  for (size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == ',') {
      std::string piece = trim(s.substr(start, i - start));
      if (!piece.empty()) out.push_back(piece);
      start = i + 1;
    }
  }
  return out;
}

Vec parse_vec(const IniFile& ini, const IniValue& v, int expected, const std::string& what) {
  std::vector<std::string> parts = split_csv(v.value);
  if (static_cast<int>(parts.size()) != expected) {
    std::ostringstream os;
    os << what << ": expected " << expected << " numbers, got " << parts.size();
    ini.fail(v.line, os.str());
  }
  Vec out(expected);
  for (int i = 0; i < expected; ++i) {
    char* end = nullptr;
    out[i] = std::strtod(parts[i].c_str(), &end);
    if (end == parts[i].c_str() || *end != '\0')
      ini.fail(v.line, what + ": malformed number '" + parts[i] + "'");
  }
  return out;
}

// Inline immersion: coordinate expressions per factor block plus a
// row-major J matrix, all differentiated by the expression engine.
ImmersionDefinition immersion_from_ini(IniFile& ini) {
  const std::string sec = "immersion";
  double c1 = parse_double(ini, *ini.get("target", "c1"), "[target] c1");
  double c2 = parse_double(ini, *ini.get("target", "c2"), "[target] c2");
  long n1 = parse_int(ini, *ini.get("target", "n1"), "[target] n1");
  long n2 = parse_int(ini, *ini.get("target", "n2"), "[target] n2");
  if (n1 < 1 || n2 < 1) throw ConfigError(ini.path + ": factor dimensions must be >= 1");

  ImmersionDefinition imm;
  imm.target = AmbientProduct::make(c1, static_cast<int>(n1), c2, static_cast<int>(n2));

  const IniValue* nm = ini.get(sec, "name");
  imm.name = nm ? nm->value : "inline";
  const IniValue* sm = ini.get(sec, "summary");
  imm.summary = sm ? sm->value : "user immersion";

  long dim = parse_int(ini, *ini.get(sec, "dim"), "[immersion] dim");
  imm.domain_dim = static_cast<int>(dim);
  if (dim < 2 || dim % 2 != 0) throw ConfigError(ini.path + ": dim must be even and >= 2");

  imm.chart.lo = parse_vec(ini, *ini.get(sec, "lo"), imm.domain_dim, "[immersion] lo");
  imm.chart.hi = parse_vec(ini, *ini.get(sec, "hi"), imm.domain_dim, "[immersion] hi");

  const int nv = imm.domain_dim;
  auto exprs_for = [&](const char* key, int count) {
    const IniValue* v = ini.get(sec, key);
    if (!v) throw ConfigError(ini.path + ": inline immersion needs [immersion] " + key);
    std::vector<Expr> es = parse_expression_list(v->value, nv);
    if (static_cast<int>(es.size()) != count) {
      std::ostringstream os;
      os << "[immersion] " << key << ": expected " << count << " expressions, got "
         << es.size();
      ini.fail(v->line, os.str());
    }
    return es;
  };

  std::vector<Expr> f1 = exprs_for("f1", imm.target.f1.embed_dim);
  std::vector<Expr> f2 = exprs_for("f2", imm.target.f2.embed_dim);
  std::vector<Expr> jm = exprs_for("j", nv * nv);

  AmbientProduct target = imm.target;
  imm.map = [f1, f2, target](const Vec& u) {
    AmbientVector p = AmbientVector::zero(target);
    for (size_t i = 0; i < f1.size(); ++i) p.b1[static_cast<Eigen::Index>(i)] = f1[i].value(u);
    for (size_t i = 0; i < f2.size(); ++i) p.b2[static_cast<Eigen::Index>(i)] = f2[i].value(u);
    return p;
  };
  imm.dmap = [f1, f2, target, nv](const Vec& u) {
    std::vector<AmbientVector> d(static_cast<size_t>(nv), AmbientVector::zero(target));
    for (int a = 0; a < nv; ++a) {
      for (size_t i = 0; i < f1.size(); ++i)
        d[a].b1[static_cast<Eigen::Index>(i)] = f1[i].deriv(u, a);
      for (size_t i = 0; i < f2.size(); ++i)
        d[a].b2[static_cast<Eigen::Index>(i)] = f2[i].deriv(u, a);
    }
    return d;
  };
  imm.jmat = [jm, nv](const Vec& u) {
    Mat J(nv, nv);
    for (int r = 0; r < nv; ++r)
      for (int c = 0; c < nv; ++c) J(r, c) = jm[static_cast<size_t>(r * nv + c)].value(u);
    return J;
  };
  imm.default_grid.assign(static_cast<size_t>(nv), 9);
  imm.validate();
  return imm;
}

std::string format_int_list(const std::vector<int>& v) {
  std::string out;
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(v[i]);
  }
  return out;
}

std::string join(const std::vector<std::string>& v) {
  std::string out;
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += v[i];
  }
  return out;
}

}  // namespace

RunConfig default_config_for_entry(const std::string& entry_name) {
  RunConfig rc;
  rc.immersion = find_entry(entry_name);
  rc.grid = rc.immersion.default_grid;
  rc.checks = check_registry();
  rebuild_echo(rc);
  validate_config(rc);
  return rc;
}

RunConfig load_config_file(const std::string& path) {
  IniFile ini = parse_ini(path);
  RunConfig rc;

  if (ini.has("immersion", "entry")) {
    std::string entry = ini.get("immersion", "entry")->value;
    rc.immersion = find_entry(entry);
    // a [target] block alongside an entry must agree with the entry
    if (ini.has("target", "c1")) {
      double c1 = parse_double(ini, *ini.get("target", "c1"), "[target] c1");
      double c2 = parse_double(ini, *ini.get("target", "c2"), "[target] c2");
      long n1 = parse_int(ini, *ini.get("target", "n1"), "[target] n1");
      long n2 = parse_int(ini, *ini.get("target", "n2"), "[target] n2");
      const AmbientProduct& t = rc.immersion.target;
      if (c1 != t.f1.curvature || c2 != t.f2.curvature || n1 != t.f1.dim || n2 != t.f2.dim)
        throw ConfigError(path + ": [target] disagrees with entry '" + entry + "'");
    }
  } else {
    if (!ini.has("target", "c1"))
      throw ConfigError(path + ": need [immersion] entry=<name> or a full [target] block");
    rc.immersion = immersion_from_ini(ini);
  }

  rc.grid = rc.immersion.default_grid;
  if (const IniValue* v = ini.get("grid", "points")) {
    std::vector<std::string> parts = split_csv(v->value);
    if (static_cast<int>(parts.size()) != rc.immersion.domain_dim) {
      std::ostringstream os;
      os << "[grid] points: expected " << rc.immersion.domain_dim << " counts, got "
         << parts.size();
      ini.fail(v->line, os.str());
    }
    rc.grid.clear();
    for (const std::string& p : parts) {
      char* end = nullptr;
      long k = std::strtol(p.c_str(), &end, 10);
      if (end == p.c_str() || *end != '\0' || k < 1)
        ini.fail(v->line, "[grid] points: bad count '" + p + "'");
      rc.grid.push_back(static_cast<int>(k));
    }
  }
  if (const IniValue* v = ini.get("grid", "h")) rc.jet.h = parse_double(ini, *v, "[grid] h");
  if (const IniValue* v = ini.get("grid", "richardson")) {
    if (v->value == "true") rc.jet.richardson = true;
    else if (v->value == "false") rc.jet.richardson = false;
    else ini.fail(v->line, "[grid] richardson: expected true or false");
  }

  if (const IniValue* v = ini.get("checks", "names")) set_checks_filter(rc, v->value);
  else rc.checks = check_registry();
  if (const IniValue* v = ini.get("checks", "algebraic_tol"))
    rc.tol.algebraic = parse_double(ini, *v, "[checks] algebraic_tol");
  if (const IniValue* v = ini.get("checks", "fd_tol"))
    rc.tol.fd = parse_double(ini, *v, "[checks] fd_tol");

  if (const IniValue* v = ini.get("output", "path")) rc.out_path = v->value;
  if (const IniValue* v = ini.get("output", "format")) {
    if (v->value == "json") rc.format = ReportFormat::Json;
    else if (v->value == "csv") rc.format = ReportFormat::Csv;
    else ini.fail(v->line, "[output] format: expected json or csv");
  }

  ini.reject_unused();
  rebuild_echo(rc);
  validate_config(rc);
  return rc;
}

void set_checks_filter(RunConfig& rc, const std::string& filter) {
  std::string f = trim(filter);
  if (f.empty()) throw ConfigError("checks filter is empty");
  if (f == "all") {
    rc.checks = check_registry();
    rebuild_echo(rc);
    return;
  }
  std::vector<std::string> wanted = split_csv(f);
  if (wanted.empty()) throw ConfigError("checks filter is empty");
  const std::vector<std::string>& reg = check_registry();
  for (const std::string& w : wanted)
    if (std::find(reg.begin(), reg.end(), w) == reg.end())
      throw ConfigError("unknown check '" + w + "'");
  // registry order, independent of the order the user wrote
  rc.checks.clear();
  for (const std::string& name : reg)
    if (std::find(wanted.begin(), wanted.end(), name) != wanted.end())
      rc.checks.push_back(name);
  rebuild_echo(rc);
}

void set_grid(RunConfig& rc, const std::vector<int>& points) {
  if (static_cast<int>(points.size()) != rc.immersion.domain_dim)
    throw ConfigError("grid size does not match the chart dimension");
  for (int k : points)
    if (k < 1) throw ConfigError("grid counts must be >= 1");
  rc.grid = points;
  rebuild_echo(rc);
}

void set_step(RunConfig& rc, double h) {
  if (!(h > 0.0)) throw ConfigError("step h must be positive");
  rc.jet.h = h;
  rebuild_echo(rc);
}

void rebuild_echo(RunConfig& rc) {
  rc.echo.clear();
  const AmbientProduct& t = rc.immersion.target;
  rc.echo.emplace_back("entry", rc.immersion.name);
  rc.echo.emplace_back("c1", format_double(t.f1.curvature));
  rc.echo.emplace_back("n1", std::to_string(t.f1.dim));
  rc.echo.emplace_back("c2", format_double(t.f2.curvature));
  rc.echo.emplace_back("n2", std::to_string(t.f2.dim));
  rc.echo.emplace_back("dim", std::to_string(rc.immersion.domain_dim));
  rc.echo.emplace_back("grid", format_int_list(rc.grid));
  rc.echo.emplace_back("h", format_double(rc.jet.h));
  rc.echo.emplace_back("richardson", rc.jet.richardson ? "true" : "false");
  rc.echo.emplace_back("checks", join(rc.checks));
  rc.echo.emplace_back("format", rc.format == ReportFormat::Json ? "json" : "csv");
  rc.echo.emplace_back("out", rc.out_path);
}

void validate_config(const RunConfig& rc) {
  if (!(rc.jet.h > 0.0)) throw ConfigError("step h must be positive");
  if (!(rc.tol.algebraic > 0.0) || !(rc.tol.fd > 0.0))
    throw ConfigError("tolerances must be positive");
  if (rc.checks.empty()) throw ConfigError("checks filter is empty");
  if (static_cast<int>(rc.grid.size()) != rc.immersion.domain_dim)
    throw ConfigError("grid size does not match the chart dimension");
  const Chart& ch = rc.immersion.chart;
  for (int a = 0; a < rc.immersion.domain_dim; ++a) {
    if (!(ch.hi[a] - ch.lo[a] > 8.0 * rc.jet.h)) {
      std::ostringstream os;
      os << "chart axis " << (a + 1) << " is too narrow for the stencil inset (needs > "
         << 8.0 * rc.jet.h << ")";
      throw ConfigError(os.str());
    }
  }
}

}  // namespace prodimm
