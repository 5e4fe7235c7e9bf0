#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "airy/assembly.hpp"
#include "airy/solve.hpp"

namespace airy {

struct CaseDefinition {
  std::string name;
  std::vector<Patch> patches;
  std::vector<BoundarySpec> bcs;
  int quad_points = 0; // 0 = degree-based default
  bool reference_available = false;
  std::function<Eigen::Vector3d(double, double)> reference; // physical (x, y)
  std::vector<double> profile_stations;                     // x stations for extracts
  std::vector<std::string> notes;
};

struct CaseOverrides {
  std::optional<double> aspect; // beam span-to-half-height ratio
  std::optional<std::pair<int, int>> degrees;
  std::optional<std::pair<int, int>> net;
  std::optional<int> quadrature;
};

extern const std::vector<std::string> builtin_case_names;

CaseDefinition build_case(const std::string& name, const CaseOverrides& overrides = {});

// Complementary energy of the case (boundary displacements are zero on all
// built-in clamps, so the external term vanishes).
QuadraticForm case_energy_form(const CaseDefinition& def, const DofMap& dofs,
                               AssemblyPolicy policy = AssemblyPolicy::Parallel);

Solution solve_case(const CaseDefinition& def, const SolveOptions& options = {},
                    AssemblyPolicy policy = AssemblyPolicy::Parallel);

// Copies of the patches with control values taken from the solution.
std::vector<Patch> apply_solution(const CaseDefinition& def, const Solution& sol);

std::optional<Eigen::Vector3d> reference_stress(const CaseDefinition& def, double x, double y);

// Relative L2 error of one stress component (0: sxx, 1: syy, 2: sxy) against
// the case reference, integrated with the assembly quadrature.
double l2_relative_error(const std::vector<Patch>& solved, const CaseDefinition& def,
                         int component);

// Integrated boundary traction of a solved patch edge.
Eigen::Vector2d edge_resultant(const Patch& solved, Side side);

} // namespace airy
