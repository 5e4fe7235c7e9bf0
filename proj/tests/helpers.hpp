#pragma once

// Shared fixtures for the test binaries: Greville interpolation (to encode
// analytic fields as control nets), a recursive one-basis evaluator used as
// an independent oracle, and small patch factories.

#include <airy/geometry.hpp>
#include <airy/material.hpp>
#include <airy/spline.hpp>
#include <airy/stress.hpp>

#include <Eigen/Dense>

#include <functional>
#include <random>

namespace testutil {

// Greville abscissa of basis i: mean of the p knots following knot i.
inline std::vector<double> greville(const airy::KnotVector& k) {
  const auto& t = k.values();
  const int p = k.degree();
  std::vector<double> g(k.count());
  for (int i = 0; i < k.count(); ++i) {
    double s = 0.0;
    for (int r = 1; r <= p; ++r) s += t[i + r];
    g[i] = p > 0 ? s / p : 0.5 * (t[i] + t[i + 1]);
  }
  return g;
}

inline Eigen::MatrixXd collocation_matrix(const airy::KnotVector& k,
                                          const std::vector<double>& at) {
  Eigen::MatrixXd B(static_cast<int>(at.size()), k.count());
  for (int a = 0; a < static_cast<int>(at.size()); ++a)
    B.row(a) = airy::basis_values(k, at[a]);
  return B;
}

// Interpolates f(xi, eta) at the Greville grid. Exact whenever f lies in the
// spline space (in particular for polynomials of coordinate degree <= (p, q)).
inline airy::ControlNet fit_net(int p, int q, int n, int m,
                                const std::function<double(double, double)>& f) {
  auto kx = airy::KnotVector::open_uniform(p, n);
  auto ke = airy::KnotVector::open_uniform(q, m);
  auto gx = greville(kx);
  auto ge = greville(ke);
  Eigen::MatrixXd V(n, m);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) V(i, j) = f(gx[i], ge[j]);
  Eigen::MatrixXd Bx = collocation_matrix(kx, gx);
  Eigen::MatrixXd Be = collocation_matrix(ke, ge);
  Eigen::MatrixXd C = Bx.partialPivLu().solve(V);
  C = Be.partialPivLu().solve(C.transpose()).transpose();
  return airy::ControlNet(kx, ke, C);
}

// Same, but f is given over the physical image of a mapping.
inline airy::ControlNet fit_net(int p, int q, int n, int m, const airy::Mapping& map,
                                const std::function<double(double, double)>& f_xy) {
  return fit_net(p, q, n, m, [&](double xi, double eta) {
    auto pt = map.map(xi, eta);
    return f_xy(pt.x(), pt.y());
  });
}

// Textbook one-basis recursion, written independently of the library's
// triangular-scheme evaluator.
inline double cox_de_boor(const std::vector<double>& t, int i, int p, double u) {
  if (p == 0) {
    bool last = t[i + 1] == t.back() && u == t.back();
    return (u >= t[i] && u < t[i + 1]) || last ? 1.0 : 0.0;
  }
  double left = 0.0, right = 0.0;
  if (t[i + p] > t[i])
    left = (u - t[i]) / (t[i + p] - t[i]) * cox_de_boor(t, i, p - 1, u);
  if (t[i + p + 1] > t[i + 1])
    right = (t[i + p + 1] - u) / (t[i + p + 1] - t[i + 1]) * cox_de_boor(t, i + 1, p - 1, u);
  return left + right;
}

inline airy::ControlNet random_net(int p, int q, int n, int m, unsigned seed,
                                   double amplitude = 1.0) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> dist(-amplitude, amplitude);
  Eigen::MatrixXd C(n, m);
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < n; ++i) C(i, j) = dist(gen);
  return airy::ControlNet(airy::KnotVector::open_uniform(p, n),
                          airy::KnotVector::open_uniform(q, m), C);
}

inline airy::Patch unit_square_patch(airy::ControlNet net, double E = 1.0, double nu = 0.0) {
  return airy::Patch{airy::Mapping::rectangle(0.0, 0.0, 1.0, 1.0), std::move(net),
                     airy::Compliance::isotropic(E, nu), airy::Potential::none()};
}

} // namespace testutil
