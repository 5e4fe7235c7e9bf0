#include "airy/geometry.hpp"

#include <cmath>

#include "airy/errors.hpp"

namespace airy {

BiPoly BiPoly::constant(double v) {
  BiPoly p;
  p.c_(0, 0) = v;
  return p;
}

double BiPoly::operator()(double xi, double eta) const {
  // Horner in eta of Horner-in-xi rows.
  double result = 0.0;
  for (int b = 3; b >= 0; --b) {
    double row = 0.0;
    for (int a = 3; a >= 0; --a) row = row * xi + c_(a, b);
    result = result * eta + row;
  }
  return result;
}

BiPoly BiPoly::d_xi() const {
  BiPoly p;
  for (int a = 1; a < 4; ++a)
    for (int b = 0; b < 4; ++b) p.c_(a - 1, b) = a * c_(a, b);
  return p;
}

BiPoly BiPoly::d_eta() const {
  BiPoly p;
  for (int a = 0; a < 4; ++a)
    for (int b = 1; b < 4; ++b) p.c_(a, b - 1) = b * c_(a, b);
  return p;
}

const char* side_name(Side s) {
  switch (s) {
    case Side::XiMin: return "xi-min";
    case Side::XiMax: return "xi-max";
    case Side::EtaMin: return "eta-min";
    case Side::EtaMax: return "eta-max";
  }
  return "?";
}

Side side_from_name(const std::string& name) {
  if (name == "xi-min") return Side::XiMin;
  if (name == "xi-max") return Side::XiMax;
  if (name == "eta-min") return Side::EtaMin;
  if (name == "eta-max") return Side::EtaMax;
  throw ConfigError("unknown edge name: " + name);
}

Mapping::Mapping(BiPoly x, BiPoly y, std::string kind)
    : x_(x), y_(y), x_xi_(x.d_xi()), x_eta_(x.d_eta()),
      y_xi_(y.d_xi()), y_eta_(y.d_eta()), kind_(std::move(kind)) {
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (double xi : {0.0, 0.5, 1.0})
    for (double eta : {0.0, 0.5, 1.0}) {
      const Eigen::Vector2d p = map(xi, eta);
      xmin = std::min(xmin, p.x());
      xmax = std::max(xmax, p.x());
      ymin = std::min(ymin, p.y());
      ymax = std::max(ymax, p.y());
    }
  scale_ = std::hypot(xmax - xmin, ymax - ymin);
  if (!(scale_ > 0.0)) throw MappingError("mapping collapses to a point");
}

Mapping Mapping::rectangle(double x0, double y0, double width, double height) {
  BiPoly x, y;
  x.coeff(0, 0) = x0;
  x.coeff(1, 0) = width;
  y.coeff(0, 0) = y0;
  y.coeff(0, 1) = height;
  return Mapping(x, y, "rectangle");
}

Mapping Mapping::bar(double l, double c) {
  BiPoly x, y;
  x.coeff(1, 0) = c;
  y.coeff(0, 0) = l;
  y.coeff(0, 1) = -l;
  return Mapping(x, y, "bar");
}

Mapping Mapping::beam(double l, double c) {
  BiPoly x, y;
  x.coeff(0, 0) = -l;
  x.coeff(1, 0) = 2 * l;
  y.coeff(0, 0) = c;
  y.coeff(0, 1) = -2 * c;
  return Mapping(x, y, "beam");
}

Mapping Mapping::bilayer_bottom(double L, double H1) {
  return rectangle(0.0, 0.0, L, H1);
}

Mapping Mapping::bilayer_top(double L, double H1, double H2) {
  return rectangle(0.0, H1, L, H2);
}

Mapping Mapping::parabolic(double L, double H0) {
  BiPoly x, y;
  x.coeff(1, 0) = L;
  const double f = H0 / 4.0;
  y.coeff(0, 0) = -3 * f;
  y.coeff(1, 0) = 4 * f;
  y.coeff(2, 0) = -2 * f;
  y.coeff(0, 1) = 4 * f;
  y.coeff(1, 1) = -4 * f;
  y.coeff(2, 1) = 2 * f;
  return Mapping(x, y, "parabolic");
}

Mapping Mapping::general(BiPoly x, BiPoly y) {
  return Mapping(x, y, "general");
}

Eigen::Vector2d Mapping::map(double xi, double eta) const {
  return {x_(xi, eta), y_(xi, eta)};
}

Eigen::Matrix2d Mapping::jacobian(double xi, double eta) const {
  Eigen::Matrix2d J;
  J << x_xi_(xi, eta), x_eta_(xi, eta), y_xi_(xi, eta), y_eta_(xi, eta);
  return J;
}

Eigen::Matrix2d Mapping::jacobian_d_xi(double xi, double eta) const {
  Eigen::Matrix2d J;
  J << x_xi_.d_xi()(xi, eta), x_eta_.d_xi()(xi, eta),
       y_xi_.d_xi()(xi, eta), y_eta_.d_xi()(xi, eta);
  return J;
}

Eigen::Matrix2d Mapping::jacobian_d_eta(double xi, double eta) const {
  Eigen::Matrix2d J;
  J << x_xi_.d_eta()(xi, eta), x_eta_.d_eta()(xi, eta),
       y_xi_.d_eta()(xi, eta), y_eta_.d_eta()(xi, eta);
  return J;
}

Eigen::Matrix2d Mapping::inverse_jacobian(double xi, double eta) const {
  const Eigen::Matrix2d J = jacobian(xi, eta);
  const double det = J.determinant();
  if (std::abs(det) < 1e-14 * scale_ * scale_)
    throw MappingError("degenerate mapping at (" + std::to_string(xi) + ", " +
                       std::to_string(eta) + ")");
  Eigen::Matrix2d A;
  A << J(1, 1), -J(0, 1), -J(1, 0), J(0, 0);
  return A / det;
}

InverseHessians Mapping::inverse_hessians(double xi, double eta) const {
  const Eigen::Matrix2d A = inverse_jacobian(xi, eta);
  // d/dxi (J^-1) = -J^-1 J_xi J^-1, then chain to physical coordinates:
  // d/dx = A(0,0) d/dxi + A(1,0) d/deta, d/dy = A(0,1) d/dxi + A(1,1) d/deta.
  const Eigen::Matrix2d A_xi = -A * jacobian_d_xi(xi, eta) * A;
  const Eigen::Matrix2d A_eta = -A * jacobian_d_eta(xi, eta) * A;
  const Eigen::Matrix2d A_x = A_xi * A(0, 0) + A_eta * A(1, 0);
  const Eigen::Matrix2d A_y = A_xi * A(0, 1) + A_eta * A(1, 1);
  InverseHessians h;
  h.xi_xx = A_x(0, 0);
  h.xi_xy = A_y(0, 0);
  h.xi_yy = A_y(0, 1);
  h.eta_xx = A_x(1, 0);
  h.eta_xy = A_y(1, 0);
  h.eta_yy = A_y(1, 1);
  return h;
}

std::array<double, 2> Mapping::invert(double x, double y) const {
  const Eigen::Vector2d target(x, y);
  double xi = 0.5, eta = 0.5;
  for (int it = 0; it < 100; ++it) {
    const Eigen::Vector2d r = map(xi, eta) - target;
    if (r.norm() < 1e-14 * scale_) return {xi, eta};
    const Eigen::Vector2d step = inverse_jacobian(xi, eta) * r;
    xi = std::clamp(xi - step.x(), 0.0, 1.0);
    eta = std::clamp(eta - step.y(), 0.0, 1.0);
  }
  if ((map(xi, eta) - target).norm() < 1e-10 * scale_) return {xi, eta};
  throw MappingError("point (" + std::to_string(x) + ", " + std::to_string(y) +
                     ") not found in the patch");
}

bool Mapping::is_affine() const {
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      if (a + b <= 1) continue;
      if (x_.coeff(a, b) != 0.0 || y_.coeff(a, b) != 0.0) return false;
    }
  return true;
}

std::array<double, 2> edge_point(Side side, double s) {
  switch (side) {
    case Side::XiMin: return {0.0, s};
    case Side::XiMax: return {1.0, s};
    case Side::EtaMin: return {s, 0.0};
    case Side::EtaMax: return {s, 1.0};
  }
  return {0.0, 0.0};
}

std::array<double, 2> edge_velocity(Side side) {
  switch (side) {
    case Side::XiMin:
    case Side::XiMax: return {0.0, 1.0};
    default: return {1.0, 0.0};
  }
}

Eigen::Vector2d outward_normal(const Mapping& m, Side side, double xi, double eta) {
  const Eigen::Matrix2d A = m.inverse_jacobian(xi, eta);
  // Rows of J^-1 are the parametric coordinate gradients; the one transverse
  // to the edge points toward growing xi (or eta) regardless of orientation.
  Eigen::Vector2d grad;
  double sign;
  switch (side) {
    case Side::XiMin: grad = A.row(0); sign = -1.0; break;
    case Side::XiMax: grad = A.row(0); sign = 1.0; break;
    case Side::EtaMin: grad = A.row(1); sign = -1.0; break;
    default: grad = A.row(1); sign = 1.0; break;
  }
  const double n = grad.norm();
  if (n == 0.0) throw MappingError("vanishing coordinate gradient on edge");
  return sign * grad / n;
}

double edge_arc_factor(const Mapping& m, Side side, double xi, double eta) {
  const Eigen::Matrix2d J = m.jacobian(xi, eta);
  const auto v = edge_velocity(side);
  return (J * Eigen::Vector2d(v[0], v[1])).norm();
}

} // namespace airy
