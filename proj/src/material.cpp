#include "airy/material.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "airy/errors.hpp"

namespace airy {

namespace {

void check_positive_definite(const Eigen::Matrix3d& w, const std::string& what) {
  Eigen::LLT<Eigen::Matrix3d> llt(w);
  if (llt.info() != Eigen::Success)
    throw MaterialError(what + ": energy form is not positive definite");
}

} // namespace

Eigen::Matrix3d rotated_compliance(const OrthotropicLayer& layer) {
  if (layer.E11 <= 0 || layer.E22 <= 0 || layer.G12 <= 0)
    throw MaterialError("moduli must be positive");
  Eigen::Matrix3d B = Eigen::Matrix3d::Zero();
  B(0, 0) = 1.0 / layer.E11;
  B(1, 1) = 1.0 / layer.E22;
  B(0, 1) = B(1, 0) = -layer.nu12 / layer.E11;
  B(2, 2) = 1.0 / layer.G12;

  const double t = layer.theta_deg * std::numbers::pi / 180.0;
  const double c = std::cos(t), s = std::sin(t), s2 = std::sin(2 * t), c2 = std::cos(2 * t);
  Eigen::Matrix3d R;
  R << c * c, s * s, s2,
       s * s, c * c, -s2,
       -s2 / 2, s2 / 2, c2;
  return R.transpose() * B * R;
}

Compliance::Compliance(Eigen::Matrix3d w, Eigen::Matrix3d raw, std::string description)
    : below_(w), above_(w), below_raw_(raw), above_raw_(raw),
      description_(std::move(description)) {
  check_positive_definite(below_, description_);
}

Compliance::Compliance(Eigen::Matrix3d below, Eigen::Matrix3d above, double y_interface,
                       std::string description)
    : below_(below), above_(above), below_raw_(below), above_raw_(above),
      y_interface_(y_interface), layered_(true), description_(std::move(description)) {
  check_positive_definite(below_, description_ + " (lower layer)");
  check_positive_definite(above_, description_ + " (upper layer)");
}

Compliance Compliance::isotropic(double E, double nu) {
  if (E <= 0) throw MaterialError("Young's modulus must be positive");
  if (std::abs(nu) >= 1) throw MaterialError("Poisson ratio magnitude must be below 1");
  // Stress -> tensor-strain matrix; the energy form doubles the shear entry
  // so that sigma^T W sigma matches the full tensor contraction.
  Eigen::Matrix3d raw = Eigen::Matrix3d::Zero();
  raw(0, 0) = raw(1, 1) = 1.0 / E;
  raw(0, 1) = raw(1, 0) = -nu / E;
  raw(2, 2) = (1.0 + nu) / E;
  Eigen::Matrix3d w = raw;
  w(2, 2) = 2.0 * (1.0 + nu) / E;
  std::ostringstream d;
  d << "isotropic(E=" << E << ", nu=" << nu << ")";
  return Compliance(w, raw, d.str());
}

Compliance Compliance::orthotropic(const OrthotropicLayer& layer) {
  std::ostringstream d;
  d << "orthotropic(theta=" << layer.theta_deg << " deg)";
  const Eigen::Matrix3d w = rotated_compliance(layer);
  return Compliance(w, w, d.str());
}

Compliance Compliance::layered(const OrthotropicLayer& below, const OrthotropicLayer& above,
                               double y_interface) {
  std::ostringstream d;
  d << "layered(theta=" << below.theta_deg << "/" << above.theta_deg
    << " deg, interface y=" << y_interface << ")";
  return Compliance(rotated_compliance(below), rotated_compliance(above), y_interface, d.str());
}

const Eigen::Matrix3d& Compliance::energy_form(double, double y) const {
  if (!layered_) return below_;
  return y <= y_interface_ ? below_ : above_;
}

const Eigen::Matrix3d& Compliance::compliance_matrix(double, double y) const {
  if (!layered_) return below_raw_;
  return y <= y_interface_ ? below_raw_ : above_raw_;
}

} // namespace airy
