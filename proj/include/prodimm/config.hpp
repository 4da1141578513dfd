#pragma once

#include <string>
#include <utility>
#include <vector>

#include "prodimm/checks.hpp"
#include "prodimm/immersion.hpp"
#include "prodimm/jet.hpp"
#include "prodimm/report.hpp"

namespace prodimm {

// Fully resolved run description: either a catalog entry or an inline
// immersion parsed from a config file, plus grid, step, tolerances, the
// expanded checks filter, and the output destination.
struct RunConfig {
  ImmersionDefinition immersion;
  std::vector<int> grid;  // points per axis, size = domain_dim
  JetOptions jet;
  Tolerances tol;
  std::vector<std::string> checks;  // concrete names in registry order
  std::string out_path;             // empty = stdout
  ReportFormat format = ReportFormat::Json;
  // canonical key/value echo for the report; rebuilt after any override
  std::vector<std::pair<std::string, std::string>> echo;
};

RunConfig default_config_for_entry(const std::string& entry_name);

// Flat sectioned text: [target] [immersion] [grid] [checks] [output].
// Inline immersions give per-coordinate expressions for both factor blocks
// and a row-major J matrix; first derivatives come from the expression
// trees. Throws ConfigError with file:line diagnostics.
RunConfig load_config_file(const std::string& path);

// filter = "all" or a comma-separated subset of check_registry(); empty or
// unknown names throw ConfigError.
void set_checks_filter(RunConfig& rc, const std::string& filter);

void set_grid(RunConfig& rc, const std::vector<int>& points);
void set_step(RunConfig& rc, double h);

// Recomputes the canonical echo from the resolved fields.
void rebuild_echo(RunConfig& rc);

// Shared validation: positive tolerances, positive step, grid sized to the
// chart with room for the widest FD stencil (4h inset).
void validate_config(const RunConfig& rc);

}  // namespace prodimm
