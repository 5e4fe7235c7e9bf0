#pragma once

#include <filesystem>

#include "airy/cases.hpp"
#include "airy/output.hpp"

namespace airy {

struct ParsedConfig {
  CaseDefinition definition;
  SolveOptions options;
  SampleGrid grid;
};

// Reads a case description file. A [case] naming a built-in case accepts
// only discretization/solver overrides; otherwise the file must define
// patches, materials, and boundary conditions in full. Unknown sections or
// keys are errors.
ParsedConfig parse_config(const std::filesystem::path& path);

} // namespace airy
