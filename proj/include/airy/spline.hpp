#pragma once

#include <Eigen/Dense>
#include <vector>

namespace airy {

// Open knot vector on [0, 1]. The open form (degree+1 repeated values at each
// end) is enforced at construction, so basis functions interpolate at both
// parametric ends.
class KnotVector {
public:
  KnotVector(int degree, std::vector<double> values);

  // Uniformly spaced interior knots for `count` basis functions.
  static KnotVector open_uniform(int degree, int count);

  int degree() const { return degree_; }
  int count() const { return static_cast<int>(values_.size()) - degree_ - 1; }
  const std::vector<double>& values() const { return values_; }

  // Index s with values[s] <= u < values[s+1]; u = 1 belongs to the last
  // non-degenerate span.
  int span_of(double u) const;

  // Distinct span boundaries, including 0 and 1.
  std::vector<double> breakpoints() const;

  // Knot vector of the derivative basis (first and last knot dropped).
  KnotVector derivative() const;

private:
  int degree_;
  std::vector<double> values_;
};

// Row of all basis function values at u. Exactly degree+1 entries are
// non-zero; the rest are exact zeros.
Eigen::RowVectorXd basis_values(const KnotVector& knots, double u);

// Matrix D with (count-1) rows mapping a coefficient vector to the control
// coefficients of its derivative: c' = D c. Zero-length knot spans
// contribute zero rows (0/0 convention).
Eigen::MatrixXd derivative_operator(const KnotVector& knots);

struct SurfacePartials {
  double value;
  double d_xi;
  double d_eta;
  double d_xixi;
  double d_xieta;
  double d_etaeta;
};

enum class Direction { Xi, Eta };

// Tensor-product spline surface: value(xi, eta) = sum_ij N_i(xi) M_j(eta) c_ij
// with coefficients stored as an n x m matrix (xi index first).
class ControlNet {
public:
  ControlNet(KnotVector knots_xi, KnotVector knots_eta, Eigen::MatrixXd coeffs);

  // Zero-coefficient net over uniform open knot vectors.
  static ControlNet uniform(int degree_xi, int degree_eta, int count_xi, int count_eta);

  const KnotVector& knots_xi() const { return kx_; }
  const KnotVector& knots_eta() const { return ke_; }
  int count_xi() const { return kx_.count(); }
  int count_eta() const { return ke_.count(); }
  int size() const { return count_xi() * count_eta(); }
  const Eigen::MatrixXd& coeffs() const { return coeffs_; }
  Eigen::MatrixXd& coeffs() { return coeffs_; }

  double value_at(double xi, double eta) const;

  // Value and parametric derivatives through second order. Requires both
  // degrees >= 2.
  SurfacePartials partials_at(double xi, double eta) const;

  // Surface of the first parametric derivative in the given direction, as a
  // net of its own (one fewer coefficient row/column, degree reduced by one).
  ControlNet derivative(Direction dir) const;

private:
  KnotVector kx_;
  KnotVector ke_;
  Eigen::MatrixXd coeffs_;
};

// Linear functionals over the flattened coefficient vector (index i + n*j)
// evaluating a net's value and derivatives at a parametric point. Rows only
// depend on knot vectors and degrees, not on coefficients.
struct BasisRows {
  Eigen::RowVectorXd value;
  Eigen::RowVectorXd d_xi;
  Eigen::RowVectorXd d_eta;
  Eigen::RowVectorXd d_xixi;
  Eigen::RowVectorXd d_xieta;
  Eigen::RowVectorXd d_etaeta;
};

BasisRows basis_rows(const ControlNet& net, double xi, double eta);

} // namespace airy
