#pragma once

#include <string>
#include <utility>
#include <vector>

#include "prodimm/checks.hpp"

namespace prodimm {

enum class ReportFormat { Json, Csv };

// One per-sample check outcome; rows are ordered grid-index first, then
// registry order of the check name.
struct SampleRow {
  int index = 0;
  Vec u;
  CheckResult result;
};

struct CheckAggregate {
  std::string check;
  CheckKind kind = CheckKind::Residual;
  int applicable = 0;
  int passed = 0;
  int failed = 0;
  // residual checks: max |value|; margin checks: min value
  double worst = 0.0;
  Verdict verdict = Verdict::NotApplicable;
  std::string notes;
};

struct ConvergenceRow {
  double h = 0.0;
  double residual = 0.0;
  double order = 0.0;  // observed order vs previous row; 0 on the first row
};

struct Report {
  int schema_version = 0;
  std::string engine;
  std::string version;
  std::vector<std::pair<std::string, std::string>> config_echo;
  std::vector<SampleRow> rows;
  std::vector<CheckAggregate> aggregates;
  std::string convergence_check;  // empty unless a convergence run
  std::vector<ConvergenceRow> convergence;
  std::vector<std::string> errors;  // per-sample evaluation failures, grid order
  std::vector<std::string> notes;   // hypotheses the engine cannot verify numerically
  int samples_total = 0;
  int samples_failed = 0;
  bool aggregate_pass = false;
  // Measured by the CLI for display only; emit_report never writes it, so
  // identical runs stay byte-identical.
  double wall_seconds = 0.0;
};

// Canonical serialization: fixed key order, doubles as %.17g. Two calls on
// the same report give identical bytes.
std::string emit_report(const Report& r, ReportFormat f);

// %.17g rendering shared by both formats.
std::string format_double(double v);

}  // namespace prodimm
