// prodimm: numerical battery for closed-form Kahler immersions into
// products of two real space forms.
//
//   prodimm list
//   prodimm check <entry|config.ini> [--checks ...] [--h ...] [--grid ...]
//                 [--out path] [--format json|csv]
//   prodimm convergence <entry|config.ini> --check <name> --h h1,h2,...
//
// The report goes to stdout (or --out) and nothing else does; progress and
// the human summary go to stderr, so piping the report stays clean.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "prodimm/catalog.hpp"
#include "prodimm/errors.hpp"
#include "prodimm/runner.hpp"

namespace {

using namespace prodimm;

RunConfig resolve_config(const std::string& source) {
  if (std::filesystem::exists(source)) return load_config_file(source);
  return default_config_for_entry(source);
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::string cur;
  auto flush = [&]() {
    if (cur.empty()) throw ConfigError("empty entry in integer list");
    size_t pos = 0;
    int v = std::stoi(cur, &pos);
    if (pos != cur.size()) throw ConfigError("bad integer '" + cur + "'");
    out.push_back(v);
    cur.clear();
  };
  for (char ch : text) {
    if (ch == ',') flush();
    else if (!std::isspace(static_cast<unsigned char>(ch))) cur += ch;
  }
  flush();
  return out;
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::string cur;
  auto flush = [&]() {
    if (cur.empty()) throw ConfigError("empty entry in step list");
    size_t pos = 0;
    double v = std::stod(cur, &pos);
    if (pos != cur.size()) throw ConfigError("bad number '" + cur + "'");
    out.push_back(v);
    cur.clear();
  };
  for (char ch : text) {
    if (ch == ',') flush();
    else if (!std::isspace(static_cast<unsigned char>(ch))) cur += ch;
  }
  flush();
  return out;
}

void set_format(RunConfig& rc, const std::string& name) {
  if (name == "json") rc.format = ReportFormat::Json;
  else if (name == "csv") rc.format = ReportFormat::Csv;
  else throw ConfigError("unknown format '" + name + "' (json or csv)");
}

void deliver(const Report& rep, const RunConfig& rc) {
  std::string bytes = emit_report(rep, rc.format);
  if (rc.out_path.empty()) {
    std::cout << bytes;
  } else {
    std::ofstream f(rc.out_path, std::ios::binary);
    if (!f) throw ConfigError("cannot open output file '" + rc.out_path + "'");
    f << bytes;
    std::cerr << "report written to " << rc.out_path << "\n";
  }
}

void summarize(const Report& rep) {
  for (const CheckAggregate& a : rep.aggregates) {
    std::cerr << "  " << a.check << ": " << verdict_name(a.verdict);
    if (a.verdict != Verdict::NotApplicable)
      std::cerr << " (worst " << format_double(a.worst) << ")";
    else if (!a.notes.empty())
      std::cerr << " (" << a.notes << ")";
    std::cerr << "\n";
  }
  for (const ConvergenceRow& row : rep.convergence)
    std::cerr << "  h = " << format_double(row.h) << "  residual = "
              << format_double(row.residual) << "  order = "
              << format_double(row.order) << "\n";
  if (!rep.errors.empty())
    std::cerr << "  " << rep.errors.size() << " sample(s) failed to evaluate\n";
  std::cerr << "aggregate: " << (rep.aggregate_pass ? "Pass" : "Fail")
            << "  [" << format_double(rep.wall_seconds) << " s]\n";
}

int run_list() {
  for (const ImmersionDefinition& e : catalog_entries()) {
    const AmbientProduct& t = e.target;
    std::cout << e.name << "\n    " << e.summary << "\n    target: Q^"
              << t.f1.dim << "(c=" << format_double(t.f1.curvature) << ") x Q^"
              << t.f2.dim << "(c=" << format_double(t.f2.curvature)
              << "), domain dim " << e.domain_dim << ", default grid";
    for (int k : e.default_grid) std::cout << " " << k;
    std::cout << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"check battery for Kahler immersions into space-form products"};
  // --h is the step-size option, so help must not own the short -h
  app.set_help_flag("--help", "print usage");
  app.require_subcommand(1);

  app.add_subcommand("list", "show the immersion catalog");

  std::string source, checks_filter, grid_arg, out_path, format_name;
  double step = 0.0;
  auto* check_cmd =
      app.add_subcommand("check", "run checks on a catalog entry or config file");
  check_cmd->set_help_flag("--help", "print usage");
  check_cmd->add_option("source", source, "catalog entry name or config path")
      ->required();
  check_cmd->add_option("--checks", checks_filter,
                        "'all' or comma-separated check names");
  check_cmd->add_option("--h", step, "finite-difference step");
  check_cmd->add_option("--grid", grid_arg, "points per axis, comma-separated");
  check_cmd->add_option("--out", out_path, "write the report to this file");
  check_cmd->add_option("--format", format_name, "json (default) or csv");

  std::string conv_source, conv_check, conv_steps, conv_grid, conv_out,
      conv_format;
  auto* conv_cmd = app.add_subcommand(
      "convergence", "residual-vs-step study for one FD-backed check");
  conv_cmd->set_help_flag("--help", "print usage");
  conv_cmd->add_option("source", conv_source, "catalog entry name or config path")
      ->required();
  conv_cmd->add_option("--check", conv_check, "which residual to track")
      ->required();
  conv_cmd->add_option("--h", conv_steps, "step sizes, comma-separated")
      ->required();
  conv_cmd->add_option("--grid", conv_grid, "points per axis, comma-separated");
  conv_cmd->add_option("--out", conv_out, "write the report to this file");
  conv_cmd->add_option("--format", conv_format, "json (default) or csv");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand("list")) return run_list();

    if (app.got_subcommand("check")) {
      RunConfig rc = resolve_config(source);
      if (!checks_filter.empty()) set_checks_filter(rc, checks_filter);
      if (check_cmd->count("--h")) set_step(rc, step);
      if (!grid_arg.empty()) set_grid(rc, parse_int_list(grid_arg));
      if (!format_name.empty()) set_format(rc, format_name);
      if (!out_path.empty()) rc.out_path = out_path;
      rebuild_echo(rc);
      validate_config(rc);

      auto t0 = std::chrono::steady_clock::now();
      Report rep = run_checks(rc);
      rep.wall_seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
              .count();
      deliver(rep, rc);
      summarize(rep);
      return exit_code_for(rep);
    }

    RunConfig rc = resolve_config(conv_source);
    if (!conv_grid.empty()) set_grid(rc, parse_int_list(conv_grid));
    if (!conv_format.empty()) set_format(rc, conv_format);
    if (!conv_out.empty()) rc.out_path = conv_out;
    rebuild_echo(rc);

    auto t0 = std::chrono::steady_clock::now();
    Report rep = run_convergence(rc, conv_check, parse_double_list(conv_steps));
    rep.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    deliver(rep, rc);
    summarize(rep);
    return exit_code_for(rep);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const GeometryError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
