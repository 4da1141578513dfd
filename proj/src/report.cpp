#include "prodimm/report.hpp"

#include <cstdio>
#include <sstream>

namespace prodimm {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 8);
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

void emit_vec(std::ostringstream& os, const Vec& u) {
  os << '[';
  for (int i = 0; i < u.size(); ++i) {
    if (i) os << ',';
    os << format_double(u[i]);
  }
  os << ']';
}

void emit_check(std::ostringstream& os, const CheckResult& c) {
  os << "{\"check\":\"" << json_escape(c.check) << "\",\"kind\":\""
     << check_kind_name(c.kind) << "\",\"value\":" << format_double(c.value)
     << ",\"tolerance\":" << format_double(c.tolerance) << ",\"verdict\":\""
     << verdict_name(c.verdict) << "\",\"notes\":\"" << json_escape(c.notes) << "\"}";
}

std::string emit_json(const Report& r) {
  std::ostringstream os;
  os << "{\n";
  os << "  \"schemaVersion\": " << r.schema_version << ",\n";
  os << "  \"engine\": \"" << json_escape(r.engine) << "\",\n";
  os << "  \"version\": \"" << json_escape(r.version) << "\",\n";

  os << "  \"config\": {";
  for (size_t i = 0; i < r.config_echo.size(); ++i) {
    if (i) os << ", ";
    os << '"' << json_escape(r.config_echo[i].first) << "\": \""
       << json_escape(r.config_echo[i].second) << '"';
  }
  os << "},\n";

  os << "  \"samples\": [\n";
  for (size_t i = 0; i < r.rows.size(); ++i) {
    const SampleRow& row = r.rows[i];
    os << "    {\"index\":" << row.index << ",\"u\":";
    emit_vec(os, row.u);
    os << ",\"result\":";
    emit_check(os, row.result);
    os << (i + 1 < r.rows.size() ? "},\n" : "}\n");
  }
  os << "  ],\n";

  os << "  \"aggregates\": [\n";
  for (size_t i = 0; i < r.aggregates.size(); ++i) {
    const CheckAggregate& a = r.aggregates[i];
    os << "    {\"check\":\"" << json_escape(a.check) << "\",\"kind\":\""
       << check_kind_name(a.kind) << "\",\"applicable\":" << a.applicable
       << ",\"passed\":" << a.passed << ",\"failed\":" << a.failed
       << ",\"worst\":" << format_double(a.worst) << ",\"verdict\":\""
       << verdict_name(a.verdict) << "\",\"notes\":\"" << json_escape(a.notes)
       << (i + 1 < r.aggregates.size() ? "\"},\n" : "\"}\n");
  }
  os << "  ],\n";

  if (!r.convergence_check.empty()) {
    os << "  \"convergence\": {\"check\": \"" << json_escape(r.convergence_check)
       << "\", \"rows\": [";
    for (size_t i = 0; i < r.convergence.size(); ++i) {
      if (i) os << ", ";
      os << "{\"h\":" << format_double(r.convergence[i].h)
         << ",\"residual\":" << format_double(r.convergence[i].residual)
         << ",\"order\":" << format_double(r.convergence[i].order) << '}';
    }
    os << "]},\n";
  }

  os << "  \"errors\": [";
  for (size_t i = 0; i < r.errors.size(); ++i) {
    if (i) os << ", ";
    os << '"' << json_escape(r.errors[i]) << '"';
  }
  os << "],\n";

  os << "  \"notes\": [";
  for (size_t i = 0; i < r.notes.size(); ++i) {
    if (i) os << ", ";
    os << '"' << json_escape(r.notes[i]) << '"';
  }
  os << "],\n";

  os << "  \"sampleCount\": " << r.samples_total << ",\n";
  os << "  \"errorCount\": " << r.samples_failed << ",\n";
  os << "  \"aggregateVerdict\": \"" << (r.aggregate_pass ? "Pass" : "Fail") << "\"\n";
  os << "}\n";
  return os.str();
}

std::string csv_field(const std::string& s) {
  bool quote = s.find_first_of(",\"\n") != std::string::npos;
  if (!quote) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += '"';
  return out;
}

std::string emit_csv(const Report& r) {
  std::ostringstream os;
  os << "index,point,check,kind,value,tolerance,verdict,notes\n";
  for (const SampleRow& row : r.rows) {
    std::string pt;
    for (int i = 0; i < row.u.size(); ++i) {
      if (i) pt += ';';
      pt += format_double(row.u[i]);
    }
    os << row.index << ',' << csv_field(pt) << ',' << row.result.check << ','
       << check_kind_name(row.result.kind) << ',' << format_double(row.result.value)
       << ',' << format_double(row.result.tolerance) << ','
       << verdict_name(row.result.verdict) << ',' << csv_field(row.result.notes)
       << '\n';
  }
  return os.str();
}

}  // namespace

std::string emit_report(const Report& r, ReportFormat f) {
  return f == ReportFormat::Json ? emit_json(r) : emit_csv(r);
}

}  // namespace prodimm
