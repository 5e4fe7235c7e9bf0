#pragma once

#include <Eigen/Dense>
#include <string>

namespace airy {

struct OrthotropicLayer {
  double E11;
  double E22;
  double G12;
  double nu12;
  double theta_deg; // rotation of the principal axes against x
};

// Plane-stress compliance as an energy form: the symmetric matrix W with
// energy density 1/2 sigma^T W sigma for sigma = (sxx, syy, sxy). The shear
// entry carries the engineering factor, e.g. 2(1+nu)/E for isotropy.
class Compliance {
public:
  static Compliance isotropic(double E, double nu);
  static Compliance orthotropic(const OrthotropicLayer& layer);
  // Two layers stacked in y; `below` applies for y <= y_interface.
  static Compliance layered(const OrthotropicLayer& below, const OrthotropicLayer& above,
                            double y_interface);

  const Eigen::Matrix3d& energy_form(double x, double y) const;
  // Compliance matrix as conventionally written: stress -> tensor strain for
  // the isotropic model, the rotated engineering matrix for layers.
  const Eigen::Matrix3d& compliance_matrix(double x, double y) const;
  bool depends_on_position() const { return layered_; }
  const std::string& description() const { return description_; }

private:
  Compliance(Eigen::Matrix3d w, Eigen::Matrix3d raw, std::string description);
  Compliance(Eigen::Matrix3d below, Eigen::Matrix3d above, double y_interface,
             std::string description);

  Eigen::Matrix3d below_;
  Eigen::Matrix3d above_;
  Eigen::Matrix3d below_raw_;
  Eigen::Matrix3d above_raw_;
  double y_interface_ = 0.0;
  bool layered_ = false;
  std::string description_;
};

// Rotated plane-stress compliance of one layer in engineering form.
Eigen::Matrix3d rotated_compliance(const OrthotropicLayer& layer);

// Scalar body-force potential V with body force f = -grad V.
class Potential {
public:
  static Potential none() { return Potential(0.0); }
  // V = -rho*g*y, i.e. gravity acting along +y.
  static Potential linear_gravity(double rho, double g) { return Potential(rho * g); }

  double value(double, double y) const { return -rho_g_ * y; }
  Eigen::Vector2d body_force() const { return {0.0, rho_g_}; }
  bool is_zero() const { return rho_g_ == 0.0; }
  double rho_g() const { return rho_g_; }

private:
  explicit Potential(double rho_g) : rho_g_(rho_g) {}
  double rho_g_;
};

} // namespace airy
