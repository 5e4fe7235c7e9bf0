#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"

#include <airy/bc.hpp>
#include <airy/errors.hpp>

using airy::ControlNet;
using airy::DerivativeEdgeConstraint;
using airy::DofMap;
using airy::Side;

namespace {

std::vector<airy::Patch> square_net(int p, int q, int n, int m) {
  return {testutil::unit_square_patch(ControlNet::uniform(p, q, n, m))};
}

Eigen::VectorXd flat_of(const Eigen::MatrixXd& C) {
  Eigen::VectorXd f(C.size());
  for (int j = 0; j < C.cols(); ++j)
    for (int i = 0; i < C.rows(); ++i) f[i + C.rows() * j] = C(i, j);
  return f;
}

} // namespace

TEST_CASE("zero first-derivative column collapses the first two control columns") {
  // the derivative control values are scaled differences, so zeroing the
  // edge column forces c_{1,j} = c_{0,j}
  auto ps = square_net(2, 2, 5, 4);
  DofMap dofs(ps);
  DerivativeEdgeConstraint edge{0, 1, 0, Side::XiMin, {}};
  auto set = airy::strong_constraints(ps, dofs, {edge});
  CHECK(set.rank == 4); // one relation per eta control row

  Eigen::MatrixXd C = Eigen::MatrixXd::Random(5, 4);
  C.row(1) = C.row(0);
  CHECK((set.A * flat_of(C) - set.b).norm() <= 1e-12);
  C(1, 2) += 1.0;
  CHECK((set.A * flat_of(C) - set.b).norm() > 1e-3);
}

TEST_CASE("full boundary stress data pins everything but the gauge and the middle") {
  // identity-mapped 5x5 quadratic net with traction data on every edge:
  // normal stress rows/columns land on the matching pure-derivative nets
  // (sigma_yy = phi_xixi along eta-edges, sigma_xx = phi_etaeta along
  // xi-edges) and the shear ring on the mixed net
  auto ps = square_net(2, 2, 5, 5);
  DofMap dofs(ps);
  std::vector<DerivativeEdgeConstraint> specs;
  for (Side s : {Side::EtaMin, Side::EtaMax}) specs.push_back({0, 2, 0, s, {}});
  for (Side s : {Side::XiMin, Side::XiMax}) specs.push_back({0, 0, 2, s, {}});
  for (Side s : {Side::XiMin, Side::XiMax, Side::EtaMin, Side::EtaMax})
    specs.push_back({0, 1, 1, s, {}});
  auto set = airy::strong_constraints(ps, dofs, specs);
  CHECK(set.rank == 21);

  auto [part, basis] = airy::constraint_parametrization(set);
  REQUIRE(basis.cols() == 25 - 21);

  // the free directions are spanned by the three affine gauge modes plus the
  // single middle control variable
  auto gx = testutil::greville(ps[0].net.knots_xi());
  Eigen::MatrixXd expect(25, 4);
  for (int j = 0; j < 5; ++j)
    for (int i = 0; i < 5; ++i) {
      expect(i + 5 * j, 0) = 1.0;
      expect(i + 5 * j, 1) = gx[i];
      expect(i + 5 * j, 2) = gx[j];
      expect(i + 5 * j, 3) = (i == 2 && j == 2) ? 1.0 : 0.0;
    }
  Eigen::MatrixXd joint(25, 8);
  joint << basis, expect;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(joint);
  int joint_rank = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()[i] > 1e-10 * svd.singularValues()(0)) ++joint_rank;
  CHECK(joint_rank == 4); // same span: nothing else is free
  CHECK((set.A * expect).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("constant curvature targets are feasible") {
  auto ps = square_net(2, 2, 5, 4);
  DofMap dofs(ps);
  DerivativeEdgeConstraint edge{0, 2, 0, Side::XiMin, Eigen::VectorXd::Constant(4, 3.5)};
  auto set = airy::strong_constraints(ps, dofs, {edge});
  auto [part, basis] = airy::constraint_parametrization(set);
  CHECK((set.A * part - set.b).norm() <= 1e-10 * set.b.norm());
  // every parametrized point satisfies the constraints
  Eigen::VectorXd y = Eigen::VectorXd::Random(basis.cols());
  CHECK((set.A * (part + basis * y) - set.b).norm() <= 1e-10 * (1 + set.b.norm()));
}

TEST_CASE("parametrization spans the whole feasible set") {
  auto ps = square_net(3, 2, 6, 4);
  DofMap dofs(ps);
  DerivativeEdgeConstraint a{0, 1, 0, Side::XiMax, {}};
  DerivativeEdgeConstraint b{0, 0, 1, Side::EtaMin, Eigen::VectorXd::Constant(6, 1.0)};
  auto set = airy::strong_constraints(ps, dofs, {a, b});
  auto [part, basis] = airy::constraint_parametrization(set);
  CHECK(basis.cols() == dofs.total() - set.rank);
  // basis columns are independent null directions
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(basis);
  CHECK(svd.singularValues()(basis.cols() - 1) > 1e-10 * svd.singularValues()(0));
  CHECK((set.A * basis).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("contradictory prescriptions are rejected") {
  auto ps = square_net(2, 2, 5, 4);
  DofMap dofs(ps);
  DerivativeEdgeConstraint first{0, 2, 0, Side::XiMin, Eigen::VectorXd::Zero(4)};
  DerivativeEdgeConstraint second{0, 2, 0, Side::XiMin, Eigen::VectorXd::Constant(4, 1.0)};
  CHECK_THROWS_AS(airy::strong_constraints(ps, dofs, {first, second}),
                  airy::ConstraintError);
}

TEST_CASE("malformed prescriptions are rejected") {
  auto ps = square_net(2, 2, 5, 4);
  DofMap dofs(ps);
  DerivativeEdgeConstraint bad_order{0, 3, 0, Side::XiMin, {}};
  CHECK_THROWS_AS(airy::strong_constraints(ps, dofs, {bad_order}), airy::ConstraintError);
  DerivativeEdgeConstraint none{0, 0, 0, Side::XiMin, {}};
  CHECK_THROWS_AS(airy::strong_constraints(ps, dofs, {none}), airy::ConstraintError);
  DerivativeEdgeConstraint wrong_len{0, 1, 0, Side::XiMin, Eigen::VectorXd::Zero(3)};
  CHECK_THROWS_AS(airy::strong_constraints(ps, dofs, {wrong_len}), airy::ConstraintError);
  auto linear = square_net(1, 1, 3, 3);
  DerivativeEdgeConstraint too_deep{0, 2, 0, Side::XiMin, {}};
  CHECK_THROWS_AS(airy::strong_constraints(linear, DofMap(linear), {too_deep}),
                  airy::ConstraintError);
}
