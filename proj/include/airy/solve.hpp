#pragma once

#include <string>
#include <vector>

#include "airy/bc.hpp"
#include "airy/quadform.hpp"

namespace airy {

enum class SolveMode { TwoStage, Combined };
enum class GaugeOption { PinAffine, MinNorm };

struct SolveOptions {
  SolveMode mode = SolveMode::TwoStage;
  double bc_weight = 1.0;         // multiplier of the BC sum in combined mode
  double involvement_tol = 1e-12; // relative to the largest BC-Hessian column norm
  GaugeOption gauge = GaugeOption::PinAffine;
};

struct SolverDiagnostics {
  std::string mode;
  int involved = 0;
  int bc_rank = 0;
  bool bc_rank_deficient = false;
  double bc_stage_residual = 0.0;
  std::string gauge;
  int pinned = 0;
  double condition_estimate = 0.0;
  double gradient_norm = 0.0; // relative gradient at the solution
};

struct Solution {
  Eigen::VectorXd phi;
  std::vector<int> constrained; // sorted global indices fixed by stage 1
  std::vector<int> free_set;    // sorted global indices determined by energy
  double energy = 0.0;
  std::vector<double> bc_residuals; // per input spec, in order
  SolverDiagnostics diag;
};

// Splits DOFs by BC-Hessian column norms: involved above tol * max norm.
std::pair<std::vector<int>, std::vector<int>> partition_dofs(const QuadraticForm& bc_form,
                                                             double tol);

// Minimum-norm minimizer of the BC form over the involved DOFs (others zero).
Eigen::VectorXd solve_bc_stage(const QuadraticForm& bc_form, const std::vector<int>& involved,
                               SolverDiagnostics* diag = nullptr);

// Minimizes the energy over the free DOFs with the others held at `fixed`.
// affine_pins lists, per patch, the global indices of the three control
// variables spanning the affine gauge.
Solution solve_energy_stage(const QuadraticForm& energy, const Eigen::VectorXd& fixed,
                            const std::vector<int>& free_set, GaugeOption gauge,
                            const std::vector<std::vector<int>>& affine_pins,
                            SolverDiagnostics diag = {});

// Minimizes energy + bc_weight * bc_form over all DOFs.
Solution solve_combined(const QuadraticForm& energy, const QuadraticForm& bc_form,
                        double bc_weight, GaugeOption gauge,
                        const std::vector<std::vector<int>>& affine_pins);

// Full pipeline: assemble BC forms from specs, run the selected mode, and
// evaluate per-spec residuals at the solution.
Solution solve_system(const std::vector<Patch>& patches, const DofMap& dofs,
                      const std::vector<BoundarySpec>& specs, const QuadraticForm& energy,
                      const SolveOptions& options);

} // namespace airy
