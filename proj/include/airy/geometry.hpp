#pragma once

#include <Eigen/Dense>
#include <array>
#include <string>

namespace airy {

// Bivariate polynomial sum_{a,b} c(a,b) xi^a eta^b with per-variable degree <= 3.
class BiPoly {
public:
  BiPoly() : c_(Eigen::Matrix4d::Zero()) {}
  static BiPoly constant(double v);

  double& coeff(int a, int b) { return c_(a, b); }
  double coeff(int a, int b) const { return c_(a, b); }

  double operator()(double xi, double eta) const;
  BiPoly d_xi() const;
  BiPoly d_eta() const;

private:
  Eigen::Matrix4d c_;
};

// Second derivatives of the inverse coordinates (xi(x,y), eta(x,y)).
struct InverseHessians {
  double xi_xx, xi_xy, xi_yy;
  double eta_xx, eta_xy, eta_yy;
};

enum class Side { XiMin, XiMax, EtaMin, EtaMax };

const char* side_name(Side s);
Side side_from_name(const std::string& name);

// Polynomial map T from the parametric unit square to a physical patch.
class Mapping {
public:
  // Axis-aligned rectangle with corner (x0, y0).
  static Mapping rectangle(double x0, double y0, double width, double height);
  // Strip of width c along x, length l along y measured downward from y=0:
  // T = (xi*c, (1-eta)*l).
  static Mapping bar(double l, double c);
  // Span 2l by height 2c centered at the origin, eta increasing downward:
  // T = ((2xi-1)*l, (1-2eta)*c).
  static Mapping beam(double l, double c);
  static Mapping bilayer_bottom(double L, double H1);
  static Mapping bilayer_top(double L, double H1, double H2);
  // Horizontal top edge at H0/4, parabolic bottom edge, height H0 at x=0
  // tapering to H0/2 at x=L.
  static Mapping parabolic(double L, double H0);
  static Mapping general(BiPoly x, BiPoly y);

  Eigen::Vector2d map(double xi, double eta) const;
  // d(x,y)/d(xi,eta).
  Eigen::Matrix2d jacobian(double xi, double eta) const;
  Eigen::Matrix2d jacobian_d_xi(double xi, double eta) const;
  Eigen::Matrix2d jacobian_d_eta(double xi, double eta) const;
  Eigen::Matrix2d inverse_jacobian(double xi, double eta) const;
  InverseHessians inverse_hessians(double xi, double eta) const;

  // Newton inversion; throws MappingError when (x, y) cannot be located.
  std::array<double, 2> invert(double x, double y) const;

  // Characteristic physical length: diagonal of the corner bounding box.
  double scale() const { return scale_; }

  bool is_affine() const;

  const std::string& kind() const { return kind_; }

private:
  Mapping(BiPoly x, BiPoly y, std::string kind);

  BiPoly x_, y_;
  BiPoly x_xi_, x_eta_, y_xi_, y_eta_;
  std::string kind_;
  double scale_;
};

// Parametric location of edge parameter s in [0,1] on a side.
std::array<double, 2> edge_point(Side side, double s);
// d(xi,eta)/ds along the side (constant).
std::array<double, 2> edge_velocity(Side side);
// Physical outward unit normal, independent of mapping orientation.
Eigen::Vector2d outward_normal(const Mapping& m, Side side, double xi, double eta);
// |d(x,y)/ds|: arc-length factor of the mapped edge.
double edge_arc_factor(const Mapping& m, Side side, double xi, double eta);

} // namespace airy
