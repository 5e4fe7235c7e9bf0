#include "airy/solve.hpp"

#include <algorithm>
#include <cmath>

#include "airy/errors.hpp"

namespace airy {

std::pair<std::vector<int>, std::vector<int>> partition_dofs(const QuadraticForm& bc_form,
                                                             double tol) {
  if (tol <= 0) throw SolverError("involvement tolerance must be positive");
  const int n = bc_form.size();
  double max_norm = 0.0;
  Eigen::VectorXd norms(n);
  for (int i = 0; i < n; ++i) {
    norms(i) = bc_form.H.col(i).norm();
    max_norm = std::max(max_norm, norms(i));
  }
  std::vector<int> involved, free_set;
  for (int i = 0; i < n; ++i) {
    if (max_norm > 0 && norms(i) > tol * max_norm)
      involved.push_back(i);
    else
      free_set.push_back(i);
  }
  return {involved, free_set};
}

namespace {

Eigen::MatrixXd submatrix(const Eigen::MatrixXd& H, const std::vector<int>& rows,
                          const std::vector<int>& cols) {
  Eigen::MatrixXd out(rows.size(), cols.size());
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t j = 0; j < cols.size(); ++j) out(i, j) = H(rows[i], cols[j]);
  return out;
}

Eigen::VectorXd subvector(const Eigen::VectorXd& g, const std::vector<int>& idx) {
  Eigen::VectorXd out(idx.size());
  for (size_t i = 0; i < idx.size(); ++i) out(i) = g(idx[i]);
  return out;
}

double cod_condition(const Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd>& cod) {
  const int r = static_cast<int>(cod.rank());
  if (r == 0) return 0.0;
  const auto& qr = cod.matrixQTZ();
  double dmax = 0.0, dmin = 1e300;
  for (int i = 0; i < r; ++i) {
    const double d = std::abs(qr(i, i));
    dmax = std::max(dmax, d);
    dmin = std::min(dmin, d);
  }
  return dmin > 0 ? dmax / dmin : 0.0;
}

} // namespace

Eigen::VectorXd solve_bc_stage(const QuadraticForm& bc_form, const std::vector<int>& involved,
                               SolverDiagnostics* diag) {
  const int n = bc_form.size();
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  if (involved.empty()) {
    if (diag) diag->bc_stage_residual = bc_form.value(x);
    return x;
  }
  const Eigen::MatrixXd Hii = submatrix(bc_form.H, involved, involved);
  const Eigen::VectorXd gi = subvector(bc_form.g, involved);

  // The normal equations H x = -g are consistent by construction (g lies in
  // the range of H for sums of squared affine functionals), so the
  // pseudo-inverse solve is the minimum-norm minimizer.
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(Hii);
  const Eigen::VectorXd xi = cod.solve(-gi);
  if (!xi.allFinite()) throw SolverError("boundary-condition stage produced non-finite values");
  for (size_t k = 0; k < involved.size(); ++k) x(involved[k]) = xi(k);

  if (diag) {
    diag->involved = static_cast<int>(involved.size());
    diag->bc_rank = static_cast<int>(cod.rank());
    diag->bc_rank_deficient = cod.rank() < static_cast<Eigen::Index>(involved.size());
    diag->bc_stage_residual = bc_form.value(x);
    diag->condition_estimate = cod_condition(cod);
  }
  return x;
}

namespace {

struct ReducedSolve {
  Eigen::VectorXd x;
  std::string gauge;
  int pinned = 0;
  double condition = 0.0;
};

// Minimizes 1/2 x^T H x + g^T x over x, optionally pinning some coordinates
// to zero first; falls back to a minimum-norm pseudo-inverse solve when the
// (pinned) system is singular.
ReducedSolve minimize_quadratic(const Eigen::MatrixXd& H, const Eigen::VectorXd& g,
                                const std::vector<int>& pins, GaugeOption gauge) {
  const int n = static_cast<int>(g.size());
  ReducedSolve out;
  out.x = Eigen::VectorXd::Zero(n);

  std::vector<int> keep;
  std::vector<char> pinned(n, 0);
  if (gauge == GaugeOption::PinAffine)
    for (int p : pins) pinned[p] = 1;
  for (int i = 0; i < n; ++i)
    if (!pinned[i]) keep.push_back(i);
  out.pinned = n - static_cast<int>(keep.size());

  const Eigen::MatrixXd Hk = submatrix(H, keep, keep);
  const Eigen::VectorXd gk = subvector(g, keep);

  Eigen::LDLT<Eigen::MatrixXd> ldlt(Hk);
  bool ldlt_ok = ldlt.info() == Eigen::Success;
  double dmin = 0.0, dmax = 0.0;
  if (ldlt_ok && Hk.rows() > 0) {
    const Eigen::VectorXd D = ldlt.vectorD();
    dmin = D.minCoeff();
    dmax = D.maxCoeff();
    if (dmin < -1e-10 * std::max(dmax, 0.0))
      throw SolverError("energy Hessian is indefinite");
    if (dmin <= 1e-13 * std::max(dmax, 0.0)) ldlt_ok = false;
  }

  Eigen::VectorXd xk;
  if (ldlt_ok) {
    xk = ldlt.solve(-gk);
    out.gauge = out.pinned > 0 ? "pin-affine" : "none (full rank)";
    out.condition = dmin > 0 ? dmax / dmin : 0.0;
  } else {
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(Hk);
    xk = cod.solve(-gk);
    out.gauge = out.pinned > 0 ? "pin-affine+min-norm" : "min-norm";
    out.condition = cod_condition(cod);
  }
  if (!xk.allFinite()) throw SolverError("singular system after gauge handling");
  for (size_t i = 0; i < keep.size(); ++i) out.x(keep[i]) = xk(i);
  return out;
}

double relative_gradient(const QuadraticForm& form, const Eigen::VectorXd& x,
                         const std::vector<int>& idx) {
  const Eigen::VectorXd grad = form.gradient(x);
  double gnorm = 0.0;
  for (int i : idx) gnorm += grad(i) * grad(i);
  gnorm = std::sqrt(gnorm);
  const double scale = std::max({form.g.norm(), (form.H * x).norm(), 1e-300});
  return gnorm / scale;
}

} // namespace

Solution solve_energy_stage(const QuadraticForm& energy, const Eigen::VectorXd& fixed,
                            const std::vector<int>& free_set, GaugeOption gauge,
                            const std::vector<std::vector<int>>& affine_pins,
                            SolverDiagnostics diag) {
  const int n = energy.size();
  Solution sol;
  sol.phi = fixed;
  sol.free_set = free_set;
  std::vector<char> is_free(n, 0);
  for (int i : free_set) is_free[i] = 1;
  for (int i = 0; i < n; ++i)
    if (!is_free[i]) sol.constrained.push_back(i);
  diag.mode = diag.mode.empty() ? "two-stage" : diag.mode;

  if (free_set.empty()) {
    sol.energy = energy.value(sol.phi);
    diag.gauge = "none (no free variables)";
    sol.diag = diag;
    return sol;
  }

  // Pins are usable only when the whole per-patch triple is free.
  std::vector<int> pins;
  for (const auto& patch_pins : affine_pins) {
    bool all_free = !patch_pins.empty();
    for (int p : patch_pins)
      if (!is_free[p]) all_free = false;
    if (all_free) {
      std::vector<int> local;
      for (int p : patch_pins)
        local.push_back(static_cast<int>(std::lower_bound(free_set.begin(), free_set.end(), p) -
                                         free_set.begin()));
      pins.insert(pins.end(), local.begin(), local.end());
    }
  }

  const Eigen::MatrixXd Hff = submatrix(energy.H, free_set, free_set);
  Eigen::VectorXd rhs = subvector(energy.g, free_set);
  for (size_t i = 0; i < free_set.size(); ++i) {
    double dot = 0.0;
    for (int j : sol.constrained) dot += energy.H(free_set[i], j) * fixed(j);
    rhs(i) += dot;
  }

  const ReducedSolve red = minimize_quadratic(Hff, rhs, pins, gauge);
  for (size_t i = 0; i < free_set.size(); ++i) sol.phi(free_set[i]) = red.x(i);

  sol.energy = energy.value(sol.phi);
  diag.gauge = gauge == GaugeOption::MinNorm ? "min-norm" : red.gauge;
  diag.pinned = red.pinned;
  if (red.condition > 0) diag.condition_estimate = std::max(diag.condition_estimate, red.condition);
  diag.gradient_norm = relative_gradient(energy, sol.phi, free_set);
  sol.diag = diag;
  return sol;
}

Solution solve_combined(const QuadraticForm& energy, const QuadraticForm& bc_form,
                        double bc_weight, GaugeOption gauge,
                        const std::vector<std::vector<int>>& affine_pins) {
  if (bc_weight <= 0) throw SolverError("combined-mode weight must be positive");
  QuadraticForm total = energy;
  total.add_scaled(bc_form, bc_weight);

  std::vector<int> all(total.size());
  for (int i = 0; i < total.size(); ++i) all[i] = i;

  SolverDiagnostics diag;
  diag.mode = "combined";
  Solution sol = solve_energy_stage(total, Eigen::VectorXd::Zero(total.size()), all, gauge,
                                    affine_pins, diag);
  sol.constrained.clear();
  sol.energy = energy.value(sol.phi);
  sol.diag.gradient_norm = relative_gradient(total, sol.phi, all);
  return sol;
}

Solution solve_system(const std::vector<Patch>& patches, const DofMap& dofs,
                      const std::vector<BoundarySpec>& specs, const QuadraticForm& energy,
                      const SolveOptions& options) {
  const QuadraticForm bc_total = total_bc_form(patches, dofs, specs);

  std::vector<std::vector<int>> pins;
  for (int p = 0; p < dofs.patch_count(); ++p) {
    const int n = patches[p].net.count_xi();
    pins.push_back({dofs.global(p, 0), dofs.global(p, 1), dofs.global(p, n)});
  }

  Solution sol;
  if (options.mode == SolveMode::TwoStage) {
    auto [involved, free_set] = partition_dofs(bc_total, options.involvement_tol);
    SolverDiagnostics diag;
    diag.mode = "two-stage";
    const Eigen::VectorXd stage1 = solve_bc_stage(bc_total, involved, &diag);
    sol = solve_energy_stage(energy, stage1, free_set, options.gauge, pins, diag);
  } else {
    sol = solve_combined(energy, bc_total, options.bc_weight, options.gauge, pins);
    auto [involved, free_set] = partition_dofs(bc_total, options.involvement_tol);
    sol.diag.involved = static_cast<int>(involved.size());
    sol.diag.bc_stage_residual = bc_total.value(sol.phi);
  }

  for (const BoundarySpec& spec : specs)
    sol.bc_residuals.push_back(spec.kind == BcKind::Free
                                   ? 0.0
                                   : residual_form(patches, dofs, spec).value(sol.phi));
  return sol;
}

} // namespace airy
