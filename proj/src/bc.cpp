#include "airy/bc.hpp"

#include <cmath>

#include "airy/assembly.hpp"
#include "airy/errors.hpp"
#include "airy/quadrature.hpp"

namespace airy {

const char* bc_kind_name(BcKind k) {
  switch (k) {
    case BcKind::TractionPointwise: return "traction-pointwise";
    case BcKind::ResultantForce: return "resultant-force";
    case BcKind::Moment: return "moment";
    case BcKind::InterfaceCoupling: return "interface-coupling";
    case BcKind::Free: return "free";
  }
  return "?";
}

namespace {

std::vector<std::pair<double, double>> edge_spans(const Patch& p, Side side) {
  const KnotVector& along = (side == Side::XiMin || side == Side::XiMax) ? p.net.knots_eta()
                                                                         : p.net.knots_xi();
  const std::vector<double> bp = along.breakpoints();
  std::vector<std::pair<double, double>> spans;
  for (size_t i = 0; i + 1 < bp.size(); ++i) spans.emplace_back(bp[i], bp[i + 1]);
  return spans;
}

struct EdgeQuadPoint {
  double s;
  double weight; // Gauss weight times arc-length factor
};

std::vector<EdgeQuadPoint> edge_quadrature(const Patch& p, Side side) {
  const int points = edge_quad_points(p);
  std::vector<EdgeQuadPoint> out;
  for (const auto& [s0, s1] : edge_spans(p, side)) {
    const QuadratureRule q = gauss_legendre(points, s0, s1);
    for (int i = 0; i < points; ++i) {
      const auto [xi, eta] = edge_point(side, q.points[i]);
      out.push_back({q.points[i], q.weights[i] * edge_arc_factor(p.mapping, side, xi, eta)});
    }
  }
  return out;
}

QuadraticForm traction_pointwise_form(const std::vector<Patch>& patches, const DofMap& dofs,
                                      const BoundarySpec& spec) {
  QuadraticForm form(dofs.total());
  const Patch& p = patches[spec.edge.patch];
  for (const EdgeQuadPoint& qp : edge_quadrature(p, spec.edge.side)) {
    const TractionOperator t = traction_operator(p, spec.edge.side, qp.s);
    const Eigen::Vector2d that =
        spec.traction ? spec.traction(qp.s) : Eigen::Vector2d::Zero().eval();
    for (int comp = 0; comp < 2; ++comp) {
      if (spec.component != BcComponent::Both &&
          comp != (spec.component == BcComponent::X ? 0 : 1))
        continue;
      form.add_squared_affine(dofs.embed(spec.edge.patch, t.rows.row(comp)),
                              t.offset(comp) - that(comp), qp.weight);
    }
  }
  return form;
}

QuadraticForm resultant_form(const std::vector<Patch>& patches, const DofMap& dofs,
                             const BoundarySpec& spec) {
  if (spec.component == BcComponent::Both)
    throw ConstraintError("resultant condition needs a single component");
  const int comp = spec.component == BcComponent::X ? 0 : 1;
  const Patch& p = patches[spec.edge.patch];
  Eigen::RowVectorXd a = Eigen::RowVectorXd::Zero(dofs.total());
  double b = 0.0;
  for (const EdgeQuadPoint& qp : edge_quadrature(p, spec.edge.side)) {
    const TractionOperator t = traction_operator(p, spec.edge.side, qp.s);
    a += qp.weight * dofs.embed(spec.edge.patch, t.rows.row(comp));
    b += qp.weight * t.offset(comp);
  }
  QuadraticForm form(dofs.total());
  form.add_squared_affine(a, b - spec.target);
  return form;
}

QuadraticForm moment_form(const std::vector<Patch>& patches, const DofMap& dofs,
                          const BoundarySpec& spec) {
  const Patch& p = patches[spec.edge.patch];
  Eigen::RowVectorXd a = Eigen::RowVectorXd::Zero(dofs.total());
  double b = 0.0;
  for (const EdgeQuadPoint& qp : edge_quadrature(p, spec.edge.side)) {
    const auto [xi, eta] = edge_point(spec.edge.side, qp.s);
    const double y = p.mapping.map(xi, eta).y();
    const TractionOperator t = traction_operator(p, spec.edge.side, qp.s);
    a += qp.weight * y * dofs.embed(spec.edge.patch, t.rows.row(0));
    b += qp.weight * y * t.offset(0);
  }
  QuadraticForm form(dofs.total());
  form.add_squared_affine(a, b - spec.target);
  return form;
}

QuadraticForm coupling_form(const std::vector<Patch>& patches, const DofMap& dofs,
                            const BoundarySpec& spec) {
  const Patch& pa = patches[spec.edge.patch];
  const Patch& pb = patches[spec.partner.patch];
  if (spec.edge.patch == spec.partner.patch && spec.edge.side == spec.partner.side)
    throw ConstraintError("interface coupling needs two distinct edges");

  // Establish the edge-parameter correspondence by sampling: s on the first
  // edge must land on either s or 1-s on the second.
  const double tol = 1e-9 * std::max(pa.mapping.scale(), pb.mapping.scale());
  double same = 0.0, flipped = 0.0;
  for (double s : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    const auto [xa, ea] = edge_point(spec.edge.side, s);
    const auto [xb, eb] = edge_point(spec.partner.side, s);
    const auto [xf, ef] = edge_point(spec.partner.side, 1.0 - s);
    const Eigen::Vector2d pt = pa.mapping.map(xa, ea);
    same = std::max(same, (pt - pb.mapping.map(xb, eb)).norm());
    flipped = std::max(flipped, (pt - pb.mapping.map(xf, ef)).norm());
  }
  if (same > tol && flipped > tol)
    throw ConstraintError("coupled edges do not trace the same physical curve");
  const bool reverse = same > tol;

  QuadraticForm form(dofs.total());
  for (const EdgeQuadPoint& qp : edge_quadrature(pa, spec.edge.side)) {
    const double sb = reverse ? 1.0 - qp.s : qp.s;
    const TractionOperator ta = traction_operator(pa, spec.edge.side, qp.s);
    const TractionOperator tb = traction_operator(pb, spec.partner.side, sb);
    for (int comp = 0; comp < 2; ++comp) {
      const Eigen::RowVectorXd row = dofs.embed(spec.edge.patch, ta.rows.row(comp)) +
                                     dofs.embed(spec.partner.patch, tb.rows.row(comp));
      form.add_squared_affine(row, ta.offset(comp) + tb.offset(comp), qp.weight);
    }
  }
  return form;
}

} // namespace

QuadraticForm residual_form(const std::vector<Patch>& patches, const DofMap& dofs,
                            const BoundarySpec& spec) {
  switch (spec.kind) {
    case BcKind::TractionPointwise: return traction_pointwise_form(patches, dofs, spec);
    case BcKind::ResultantForce: return resultant_form(patches, dofs, spec);
    case BcKind::Moment: return moment_form(patches, dofs, spec);
    case BcKind::InterfaceCoupling: return coupling_form(patches, dofs, spec);
    case BcKind::Free: return QuadraticForm(dofs.total());
  }
  throw ConstraintError("unknown boundary condition kind");
}

QuadraticForm total_bc_form(const std::vector<Patch>& patches, const DofMap& dofs,
                            const std::vector<BoundarySpec>& specs) {
  QuadraticForm total(dofs.total());
  for (const BoundarySpec& spec : specs) {
    if (spec.kind == BcKind::Free) continue;
    if (spec.weight < 0) throw ConstraintError("negative boundary condition weight");
    total.add_scaled(residual_form(patches, dofs, spec), spec.weight);
  }
  return total;
}

namespace {

// Operator mapping original control values to the control values of the
// (order_xi, order_eta) derivative net (flattened i + rows*j).
Eigen::MatrixXd derivative_net_operator(const ControlNet& net, int order_xi, int order_eta) {
  const int n = net.count_xi();
  const int m = net.count_eta();
  Eigen::MatrixXd Dx = Eigen::MatrixXd::Identity(n, n);
  KnotVector kx = net.knots_xi();
  for (int k = 0; k < order_xi; ++k) {
    Dx = (derivative_operator(kx) * Dx).eval();
    kx = kx.derivative();
  }
  Eigen::MatrixXd De = Eigen::MatrixXd::Identity(m, m);
  KnotVector ke = net.knots_eta();
  for (int k = 0; k < order_eta; ++k) {
    De = (derivative_operator(ke) * De).eval();
    ke = ke.derivative();
  }
  // kron(De, Dx): output index i + (n-order_xi)*j.
  const int rn = n - order_xi;
  const int rm = m - order_eta;
  Eigen::MatrixXd M(rn * rm, n * m);
  for (int j = 0; j < rm; ++j)
    for (int i = 0; i < rn; ++i)
      for (int jj = 0; jj < m; ++jj)
        for (int ii = 0; ii < n; ++ii)
          M(i + rn * j, ii + n * jj) = Dx(i, ii) * De(j, jj);
  return M;
}

} // namespace

StrongConstraintSet strong_constraints(const std::vector<Patch>& patches, const DofMap& dofs,
                                       const std::vector<DerivativeEdgeConstraint>& prescribed) {
  std::vector<Eigen::RowVectorXd> rows;
  std::vector<double> rhs;
  for (const DerivativeEdgeConstraint& c : prescribed) {
    const int order = c.order_xi + c.order_eta;
    if (order < 1 || order > 2 || c.order_xi < 0 || c.order_eta < 0)
      throw ConstraintError("derivative order must be 1 or 2");
    const Patch& p = patches[c.patch];
    const int n = p.net.count_xi();
    const int m = p.net.count_eta();
    if (p.net.knots_xi().degree() < c.order_xi || p.net.knots_eta().degree() < c.order_eta)
      throw ConstraintError("degree too low for the prescribed derivative");
    const Eigen::MatrixXd M = derivative_net_operator(p.net, c.order_xi, c.order_eta);
    const int rn = n - c.order_xi;
    const int rm = m - c.order_eta;

    std::vector<int> picks;
    switch (c.side) {
      case Side::XiMin:
        for (int j = 0; j < rm; ++j) picks.push_back(0 + rn * j);
        break;
      case Side::XiMax:
        for (int j = 0; j < rm; ++j) picks.push_back(rn - 1 + rn * j);
        break;
      case Side::EtaMin:
        for (int i = 0; i < rn; ++i) picks.push_back(i);
        break;
      case Side::EtaMax:
        for (int i = 0; i < rn; ++i) picks.push_back(i + rn * (rm - 1));
        break;
    }
    if (c.targets.size() != 0 && c.targets.size() != static_cast<int>(picks.size()))
      throw ConstraintError("target count does not match edge control variables");
    for (size_t k = 0; k < picks.size(); ++k) {
      rows.push_back(dofs.embed(c.patch, M.row(picks[k])));
      rhs.push_back(c.targets.size() ? c.targets(k) : 0.0);
    }
  }

  StrongConstraintSet set;
  set.A.resize(rows.size(), dofs.total());
  set.b.resize(rows.size());
  for (size_t r = 0; r < rows.size(); ++r) {
    set.A.row(r) = rows[r];
    set.b(r) = rhs[r];
  }
  if (rows.empty()) {
    set.rank = 0;
    return set;
  }
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(set.A);
  set.rank = static_cast<int>(cod.rank());
  // Feasibility: the least-squares solution must satisfy the system.
  const Eigen::VectorXd x = cod.solve(set.b);
  const double scale = std::max(1.0, set.b.norm());
  if ((set.A * x - set.b).norm() > 1e-9 * scale)
    throw ConstraintError("inconsistent constraint set");
  return set;
}

std::pair<Eigen::VectorXd, Eigen::MatrixXd> constraint_parametrization(
    const StrongConstraintSet& set) {
  if (set.A.rows() == 0)
    return {Eigen::VectorXd::Zero(set.A.cols()),
            Eigen::MatrixXd::Identity(set.A.cols(), set.A.cols())};
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(set.A);
  const Eigen::VectorXd particular = cod.solve(set.b);
  // Nullspace basis from the full SVD.
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(set.A, Eigen::ComputeFullV);
  const int rank = static_cast<int>(svd.rank());
  const Eigen::MatrixXd null_basis = svd.matrixV().rightCols(set.A.cols() - rank);
  return {particular, null_basis};
}

} // namespace airy
