#pragma once

#include <Eigen/Dense>

namespace airy {

// Quadratic functional value(phi) = 1/2 phi^T H phi + g^T phi + c with
// symmetric H. Sums of such forms accumulate term by term.
class QuadraticForm {
public:
  QuadraticForm() = default;
  explicit QuadraticForm(int n)
      : H(Eigen::MatrixXd::Zero(n, n)), g(Eigen::VectorXd::Zero(n)) {}

  int size() const { return static_cast<int>(g.size()); }

  double value(const Eigen::VectorXd& phi) const {
    return 0.5 * phi.dot(H * phi) + g.dot(phi) + c;
  }

  Eigen::VectorXd gradient(const Eigen::VectorXd& phi) const { return H * phi + g; }

  QuadraticForm& operator+=(const QuadraticForm& other) { return add_scaled(other, 1.0); }

  QuadraticForm& add_scaled(const QuadraticForm& other, double s) {
    H += s * other.H;
    g += s * other.g;
    c += s * other.c;
    return *this;
  }

  // Accumulates weight * (a . phi + b)^2.
  void add_squared_affine(const Eigen::RowVectorXd& a, double b, double weight = 1.0);

  Eigen::MatrixXd H;
  Eigen::VectorXd g;
  double c = 0.0;
};

} // namespace airy
