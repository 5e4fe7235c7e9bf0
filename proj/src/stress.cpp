#include "airy/stress.hpp"

namespace airy {

DofMap::DofMap(const std::vector<Patch>& patches) {
  for (const Patch& p : patches) {
    offsets_.push_back(total_);
    sizes_.push_back(p.net.size());
    total_ += p.net.size();
  }
}

Eigen::RowVectorXd DofMap::embed(int patch, const Eigen::RowVectorXd& local) const {
  Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(total_);
  row.segment(offsets_[patch], sizes_[patch]) = local;
  return row;
}

StressOperator stress_operator(const Patch& p, double xi, double eta) {
  const BasisRows b = basis_rows(p.net, xi, eta);
  const Eigen::Matrix2d A = p.mapping.inverse_jacobian(xi, eta);
  const InverseHessians h = p.mapping.inverse_hessians(xi, eta);

  const double xx = A(0, 0), xy = A(0, 1); // grad xi
  const double ex = A(1, 0), ey = A(1, 1); // grad eta

  // Chain rule for the physical Hessian of the stress function.
  const Eigen::RowVectorXd phi_xx = xx * xx * b.d_xixi + 2 * xx * ex * b.d_xieta +
                                    ex * ex * b.d_etaeta + h.xi_xx * b.d_xi + h.eta_xx * b.d_eta;
  const Eigen::RowVectorXd phi_xy = xx * xy * b.d_xixi + (xx * ey + xy * ex) * b.d_xieta +
                                    ex * ey * b.d_etaeta + h.xi_xy * b.d_xi + h.eta_xy * b.d_eta;
  const Eigen::RowVectorXd phi_yy = xy * xy * b.d_xixi + 2 * xy * ey * b.d_xieta +
                                    ey * ey * b.d_etaeta + h.xi_yy * b.d_xi + h.eta_yy * b.d_eta;

  StressOperator op;
  op.rows.resize(3, p.net.size());
  op.rows.row(0) = phi_yy;
  op.rows.row(1) = phi_xx;
  op.rows.row(2) = -phi_xy;
  const Eigen::Vector2d x = p.mapping.map(xi, eta);
  const double v = p.potential.value(x.x(), x.y());
  op.offset = Eigen::Vector3d(v, v, 0.0);
  return op;
}

Eigen::Vector3d stress_at(const Patch& p, double xi, double eta) {
  const StressOperator op = stress_operator(p, xi, eta);
  const Eigen::Map<const Eigen::VectorXd> phi(p.net.coeffs().data(), p.net.size());
  return op.rows * phi + op.offset;
}

TractionOperator traction_operator(const Patch& p, Side side, double s) {
  const auto [xi, eta] = edge_point(side, s);
  const StressOperator op = stress_operator(p, xi, eta);
  const Eigen::Vector2d n = outward_normal(p.mapping, side, xi, eta);

  TractionOperator t;
  t.rows.resize(2, p.net.size());
  t.rows.row(0) = n.x() * op.rows.row(0) + n.y() * op.rows.row(2);
  t.rows.row(1) = n.x() * op.rows.row(2) + n.y() * op.rows.row(1);
  t.offset.x() = n.x() * op.offset(0) + n.y() * op.offset(2);
  t.offset.y() = n.x() * op.offset(2) + n.y() * op.offset(1);
  return t;
}

Eigen::Vector2d traction_at(const Patch& p, Side side, double s) {
  const TractionOperator op = traction_operator(p, side, s);
  const Eigen::Map<const Eigen::VectorXd> phi(p.net.coeffs().data(), p.net.size());
  return op.rows * phi + op.offset;
}

} // namespace airy
