#include "airy/quadform.hpp"

namespace airy {

void QuadraticForm::add_squared_affine(const Eigen::RowVectorXd& a, double b, double weight) {
  H.noalias() += (2.0 * weight) * (a.transpose() * a);
  g.noalias() += (2.0 * weight * b) * a.transpose();
  c += weight * b * b;
}

} // namespace airy
