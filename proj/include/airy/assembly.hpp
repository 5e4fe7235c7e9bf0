#pragma once

#include <functional>
#include <vector>

#include "airy/quadform.hpp"
#include "airy/stress.hpp"

namespace airy {

// Parallel: knot spans are integrated concurrently into span-local blocks,
// then reduced serially in a fixed span order, so results are bit-identical
// for any thread count. Serial: an independent reference loop accumulating
// directly into the global form.
enum class AssemblyPolicy { Parallel, Serial };

// Internal complementary energy 1/2 integral sigma^T W sigma over all
// patches. quad_points = Gauss points per direction per knot span;
// 0 selects degree+1 per direction.
QuadraticForm internal_energy_form(const std::vector<Patch>& patches, const DofMap& dofs,
                                   int quad_points = 0,
                                   AssemblyPolicy policy = AssemblyPolicy::Parallel);

// Edge with a prescribed displacement, contributing external work
// -integral u . t dGamma.
struct DisplacementEdge {
  EdgeRef edge;
  std::function<Eigen::Vector2d(double)> displacement; // u(s); null means zero
};

QuadraticForm external_energy_form(const std::vector<Patch>& patches, const DofMap& dofs,
                                   const std::vector<DisplacementEdge>& edges);

// Number of Gauss points per direction used for a patch.
std::pair<int, int> patch_quad_points(const Patch& p, int quad_points);

// Gauss point count along edges of a patch.
int edge_quad_points(const Patch& p);

} // namespace airy
