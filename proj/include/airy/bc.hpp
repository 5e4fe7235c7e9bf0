#pragma once

#include <functional>
#include <string>
#include <vector>

#include "airy/quadform.hpp"
#include "airy/stress.hpp"

namespace airy {

enum class BcKind {
  TractionPointwise, // integral |t - that|^2 dGamma
  ResultantForce,    // (integral t_i dGamma - F)^2
  Moment,            // (integral t_x y dGamma - M)^2
  InterfaceCoupling, // integral |t_a + t_b|^2 dGamma
  Free,              // displacement boundary: no traction condition
};

enum class BcComponent { X, Y, Both };

struct BoundarySpec {
  EdgeRef edge;
  BcKind kind = BcKind::Free;
  BcComponent component = BcComponent::Both;
  // Prescribed traction along the edge parameter (traction-pointwise only);
  // null means zero traction.
  std::function<Eigen::Vector2d(double)> traction = nullptr;
  double target = 0.0;  // resultant force or moment
  EdgeRef partner = {}; // interface-coupling only
  double weight = 1.0;
  std::string label = {};
};

const char* bc_kind_name(BcKind k);

// Residual form of one spec over the global DOF vector (weight not applied).
QuadraticForm residual_form(const std::vector<Patch>& patches, const DofMap& dofs,
                            const BoundarySpec& spec);

// Weighted sum of all residual forms; Free specs contribute nothing.
QuadraticForm total_bc_form(const std::vector<Patch>& patches, const DofMap& dofs,
                            const std::vector<BoundarySpec>& specs);

// Equality constraints A phi = b over global DOFs.
struct StrongConstraintSet {
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  int rank = 0; // numerical rank after reduction
};

// Prescribes control values of a derivative net along one edge of a patch.
struct DerivativeEdgeConstraint {
  int patch = 0;
  int order_xi = 0;
  int order_eta = 0;
  Side side = Side::XiMin;
  // One value per derivative-net control variable along the edge; empty
  // means all zero.
  Eigen::VectorXd targets;
};

// Composes the control-difference relations of derivative nets into linear
// constraints on the original control variables. Throws on infeasible sets.
StrongConstraintSet strong_constraints(const std::vector<Patch>& patches, const DofMap& dofs,
                                       const std::vector<DerivativeEdgeConstraint>& prescribed);

// Particular solution and nullspace basis of a constraint set: any feasible
// phi = particular + basis * y.
std::pair<Eigen::VectorXd, Eigen::MatrixXd> constraint_parametrization(
    const StrongConstraintSet& set);

} // namespace airy
