#include "airy/spline.hpp"

#include <algorithm>
#include <cmath>

#include "airy/errors.hpp"

namespace airy {

KnotVector::KnotVector(int degree, std::vector<double> values)
    : degree_(degree), values_(std::move(values)) {
  if (degree_ < 0) throw DiscretizationError("negative spline degree");
  const int len = static_cast<int>(values_.size());
  if (len < 2 * (degree_ + 1))
    throw DiscretizationError("knot vector too short for degree");
  if (!std::is_sorted(values_.begin(), values_.end()))
    throw DiscretizationError("knot vector must be non-decreasing");
  for (int i = 0; i <= degree_; ++i) {
    if (values_[i] != 0.0 || values_[len - 1 - i] != 1.0)
      throw DiscretizationError("knot vector must be open on [0, 1]");
  }
}

KnotVector KnotVector::open_uniform(int degree, int count) {
  if (count < degree + 1)
    throw DiscretizationError("basis count must be at least degree + 1");
  std::vector<double> v(count + degree + 1);
  const int spans = count - degree;
  for (int i = 0; i < static_cast<int>(v.size()); ++i) {
    if (i <= degree)
      v[i] = 0.0;
    else if (i >= count)
      v[i] = 1.0;
    else
      v[i] = static_cast<double>(i - degree) / spans;
  }
  return KnotVector(degree, std::move(v));
}

int KnotVector::span_of(double u) const {
  if (u < 0.0 || u > 1.0)
    throw DomainError("parameter outside [0, 1]");
  const int n = count();
  if (u >= values_[n]) return n - 1;
  // values_[degree] <= u < values_[n]: binary search for the containing span.
  int lo = degree_;
  int hi = n;
  while (hi - lo > 1) {
    const int mid = (lo + hi) / 2;
    if (u < values_[mid])
      hi = mid;
    else
      lo = mid;
  }
  return lo;
}

std::vector<double> KnotVector::breakpoints() const {
  std::vector<double> out;
  for (double v : values_)
    if (out.empty() || v > out.back()) out.push_back(v);
  return out;
}

KnotVector KnotVector::derivative() const {
  if (degree_ < 1)
    throw DiscretizationError("cannot differentiate a degree-0 basis");
  std::vector<double> v(values_.begin() + 1, values_.end() - 1);
  return KnotVector(degree_ - 1, std::move(v));
}

Eigen::RowVectorXd basis_values(const KnotVector& knots, double u) {
  const int n = knots.count();
  const int p = knots.degree();
  const auto& kv = knots.values();
  const int s = knots.span_of(u);

  // Triangular recurrence over the p+1 functions supported on span s.
  std::vector<double> N(p + 1), left(p + 1), right(p + 1);
  N[0] = 1.0;
  for (int d = 1; d <= p; ++d) {
    left[d] = u - kv[s + 1 - d];
    right[d] = kv[s + d] - u;
    double saved = 0.0;
    for (int r = 0; r < d; ++r) {
      const double denom = right[r + 1] + left[d - r];
      const double temp = denom != 0.0 ? N[r] / denom : 0.0;
      N[r] = saved + right[r + 1] * temp;
      saved = left[d - r] * temp;
    }
    N[d] = saved;
  }

  Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(n);
  for (int k = 0; k <= p; ++k) row(s - p + k) = N[k];
  return row;
}

Eigen::MatrixXd derivative_operator(const KnotVector& knots) {
  const int n = knots.count();
  const int p = knots.degree();
  if (p < 1)
    throw DiscretizationError("cannot differentiate a degree-0 basis");
  const auto& kv = knots.values();
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(n - 1, n);
  for (int i = 0; i < n - 1; ++i) {
    const double dk = kv[i + p + 1] - kv[i + 1];
    if (dk == 0.0) continue;
    const double f = p / dk;
    D(i, i) = -f;
    D(i, i + 1) = f;
  }
  return D;
}

ControlNet::ControlNet(KnotVector knots_xi, KnotVector knots_eta, Eigen::MatrixXd coeffs)
    : kx_(std::move(knots_xi)), ke_(std::move(knots_eta)), coeffs_(std::move(coeffs)) {
  if (coeffs_.rows() != kx_.count() || coeffs_.cols() != ke_.count())
    throw DiscretizationError("control net shape does not match knot vectors");
}

ControlNet ControlNet::uniform(int degree_xi, int degree_eta, int count_xi, int count_eta) {
  return ControlNet(KnotVector::open_uniform(degree_xi, count_xi),
                    KnotVector::open_uniform(degree_eta, count_eta),
                    Eigen::MatrixXd::Zero(count_xi, count_eta));
}

double ControlNet::value_at(double xi, double eta) const {
  const Eigen::RowVectorXd nx = basis_values(kx_, xi);
  const Eigen::RowVectorXd ne = basis_values(ke_, eta);
  return nx * coeffs_ * ne.transpose();
}

ControlNet ControlNet::derivative(Direction dir) const {
  if (dir == Direction::Xi) {
    const Eigen::MatrixXd D = derivative_operator(kx_);
    return ControlNet(kx_.derivative(), ke_, D * coeffs_);
  }
  const Eigen::MatrixXd D = derivative_operator(ke_);
  return ControlNet(kx_, ke_.derivative(), coeffs_ * D.transpose());
}

SurfacePartials ControlNet::partials_at(double xi, double eta) const {
  if (kx_.degree() < 2 || ke_.degree() < 2)
    throw DiscretizationError("second derivatives require degree >= 2 in both directions");
  const BasisRows rows = basis_rows(*this, xi, eta);
  Eigen::VectorXd c(Eigen::Map<const Eigen::VectorXd>(coeffs_.data(), coeffs_.size()));
  SurfacePartials sp;
  sp.value = rows.value * c;
  sp.d_xi = rows.d_xi * c;
  sp.d_eta = rows.d_eta * c;
  sp.d_xixi = rows.d_xixi * c;
  sp.d_xieta = rows.d_xieta * c;
  sp.d_etaeta = rows.d_etaeta * c;
  return sp;
}

namespace {

Eigen::RowVectorXd kron_row(const Eigen::RowVectorXd& eta_row, const Eigen::RowVectorXd& xi_row) {
  const int n = static_cast<int>(xi_row.size());
  const int m = static_cast<int>(eta_row.size());
  Eigen::RowVectorXd out(n * m);
  for (int j = 0; j < m; ++j)
    out.segment(j * n, n) = eta_row(j) * xi_row;
  return out;
}

// Value/derivative functional rows for one direction: [N_p, N_{p-1} D1, N_{p-2} D2 D1].
struct DirRows {
  Eigen::RowVectorXd v, d1, d2;
};

DirRows direction_rows(const KnotVector& knots, double u) {
  DirRows r;
  r.v = basis_values(knots, u);
  const Eigen::MatrixXd D1 = derivative_operator(knots);
  const KnotVector k1 = knots.derivative();
  r.d1 = basis_values(k1, u) * D1;
  const Eigen::MatrixXd D2 = derivative_operator(k1);
  r.d2 = basis_values(k1.derivative(), u) * (D2 * D1);
  return r;
}

} // namespace

BasisRows basis_rows(const ControlNet& net, double xi, double eta) {
  if (net.knots_xi().degree() < 2 || net.knots_eta().degree() < 2)
    throw DiscretizationError("second derivatives require degree >= 2 in both directions");
  const DirRows rx = direction_rows(net.knots_xi(), xi);
  const DirRows re = direction_rows(net.knots_eta(), eta);
  BasisRows rows;
  rows.value = kron_row(re.v, rx.v);
  rows.d_xi = kron_row(re.v, rx.d1);
  rows.d_eta = kron_row(re.d1, rx.v);
  rows.d_xixi = kron_row(re.v, rx.d2);
  rows.d_xieta = kron_row(re.d1, rx.d1);
  rows.d_etaeta = kron_row(re.d2, rx.v);
  return rows;
}

} // namespace airy
