#pragma once

#include <string>
#include <vector>

#include "prodimm/immersion.hpp"

namespace prodimm {

// Built-in closed-form immersions with exact first derivatives and their
// complex structures. Read-only after first use.
const std::vector<ImmersionDefinition>& catalog_entries();

std::vector<std::string> catalog_names();

// Throws ConfigError (listing valid names) when absent.
const ImmersionDefinition& find_entry(const std::string& name);

}  // namespace prodimm
