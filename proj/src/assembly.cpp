#include "airy/assembly.hpp"

#include <algorithm>

#include "airy/errors.hpp"
#include "airy/quadrature.hpp"

namespace airy {

std::pair<int, int> patch_quad_points(const Patch& p, int quad_points) {
  if (quad_points > 0) return {quad_points, quad_points};
  return {p.net.knots_xi().degree() + 1, p.net.knots_eta().degree() + 1};
}

int edge_quad_points(const Patch& p) {
  return std::max(p.net.knots_xi().degree(), p.net.knots_eta().degree()) + 2;
}

namespace {

struct SpanTask {
  int patch;
  double xi0, xi1, eta0, eta1;
};

std::vector<SpanTask> span_tasks(const std::vector<Patch>& patches) {
  std::vector<SpanTask> tasks;
  for (int p = 0; p < static_cast<int>(patches.size()); ++p) {
    const auto bx = patches[p].net.knots_xi().breakpoints();
    const auto be = patches[p].net.knots_eta().breakpoints();
    for (size_t j = 0; j + 1 < be.size(); ++j)
      for (size_t i = 0; i + 1 < bx.size(); ++i)
        tasks.push_back({p, bx[i], bx[i + 1], be[j], be[j + 1]});
  }
  return tasks;
}

// Dofs with support on a span sit in a contiguous index window of the
// flattened (xi-major) net; everything outside it is exactly zero, so the
// per-span block only needs to cover the window.
int first_active(const KnotVector& kv, double a, double b) {
  const std::vector<double>& t = kv.values();
  const int p = kv.degree();
  const int count = static_cast<int>(t.size()) - p - 1;
  const double mid = 0.5 * (a + b);
  int span = p;
  while (span < count - 1 && t[span + 1] <= mid) ++span;
  return span - p;
}

struct LocalBlock {
  int start = 0;
  Eigen::MatrixXd H;
  Eigen::VectorXd g;
  double c = 0.0;
};

LocalBlock integrate_span(const Patch& patch, const SpanTask& t, int nx, int ny) {
  const int rows = patch.net.count_xi();
  const int p = patch.net.knots_xi().degree();
  const int q = patch.net.knots_eta().degree();
  const int start = first_active(patch.net.knots_xi(), t.xi0, t.xi1) +
                    rows * first_active(patch.net.knots_eta(), t.eta0, t.eta1);
  const int width = p + rows * q + 1;
  LocalBlock block{start, Eigen::MatrixXd::Zero(width, width), Eigen::VectorXd::Zero(width), 0.0};
  const QuadratureRule qx = gauss_legendre(nx, t.xi0, t.xi1);
  const QuadratureRule qy = gauss_legendre(ny, t.eta0, t.eta1);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const double xi = qx.points[i];
      const double eta = qy.points[j];
      const double w = qx.weights[i] * qy.weights[j];
      const StressOperator op = stress_operator(patch, xi, eta);
      const double jac = std::abs(patch.mapping.jacobian(xi, eta).determinant());
      const Eigen::Vector2d x = patch.mapping.map(xi, eta);
      const Eigen::Matrix3d& W = patch.material.energy_form(x.x(), x.y());
      const double wt = w * jac;
      const auto B = op.rows.middleCols(start, width);
      const Eigen::Matrix<double, 3, Eigen::Dynamic> WB = W * B;
      block.H.noalias() += wt * (B.transpose() * WB);
      block.g.noalias() += wt * (WB.transpose() * op.offset);
      block.c += 0.5 * wt * op.offset.dot(W * op.offset);
    }
  }
  return block;
}

} // namespace

QuadraticForm internal_energy_form(const std::vector<Patch>& patches, const DofMap& dofs,
                                   int quad_points, AssemblyPolicy policy) {
  QuadraticForm form(dofs.total());

  if (policy == AssemblyPolicy::Serial) {
    // Reference path: plain loops, direct accumulation into the global form.
    for (int p = 0; p < static_cast<int>(patches.size()); ++p) {
      const Patch& patch = patches[p];
      const auto [nx, ny] = patch_quad_points(patch, quad_points);
      const int off = dofs.offset(p);
      const int k = patch.net.size();
      const auto bx = patch.net.knots_xi().breakpoints();
      const auto be = patch.net.knots_eta().breakpoints();
      for (size_t sj = 0; sj + 1 < be.size(); ++sj) {
        for (size_t si = 0; si + 1 < bx.size(); ++si) {
          const QuadratureRule qx = gauss_legendre(nx, bx[si], bx[si + 1]);
          const QuadratureRule qy = gauss_legendre(ny, be[sj], be[sj + 1]);
          for (int j = 0; j < ny; ++j) {
            for (int i = 0; i < nx; ++i) {
              const StressOperator op = stress_operator(patch, qx.points[i], qy.points[j]);
              const double jac =
                  std::abs(patch.mapping.jacobian(qx.points[i], qy.points[j]).determinant());
              const Eigen::Vector2d x = patch.mapping.map(qx.points[i], qy.points[j]);
              const Eigen::Matrix3d& W = patch.material.energy_form(x.x(), x.y());
              const double wt = qx.weights[i] * qy.weights[j] * jac;
              const Eigen::Matrix<double, 3, Eigen::Dynamic> WB = W * op.rows;
              form.H.block(off, off, k, k).noalias() += wt * (op.rows.transpose() * WB);
              form.g.segment(off, k).noalias() += wt * (WB.transpose() * op.offset);
              form.c += 0.5 * wt * op.offset.dot(W * op.offset);
            }
          }
        }
      }
    }
    return form;
  }

  const std::vector<SpanTask> tasks = span_tasks(patches);
  std::vector<LocalBlock> blocks(tasks.size());
#pragma omp parallel for schedule(dynamic)
  for (int t = 0; t < static_cast<int>(tasks.size()); ++t) {
    const Patch& patch = patches[tasks[t].patch];
    const auto [nx, ny] = patch_quad_points(patch, quad_points);
    blocks[t] = integrate_span(patch, tasks[t], nx, ny);
  }
  // Fixed-order reduction, independent of thread scheduling.
  for (size_t t = 0; t < tasks.size(); ++t) {
    const int at = dofs.offset(tasks[t].patch) + blocks[t].start;
    const int w = static_cast<int>(blocks[t].g.size());
    form.H.block(at, at, w, w) += blocks[t].H;
    form.g.segment(at, w) += blocks[t].g;
    form.c += blocks[t].c;
  }
  return form;
}

QuadraticForm external_energy_form(const std::vector<Patch>& patches, const DofMap& dofs,
                                   const std::vector<DisplacementEdge>& edges) {
  QuadraticForm form(dofs.total());
  for (const DisplacementEdge& e : edges) {
    if (!e.displacement) continue;
    const Patch& patch = patches[e.edge.patch];
    const int points = edge_quad_points(patch);
    const KnotVector& along = (e.edge.side == Side::XiMin || e.edge.side == Side::XiMax)
                                  ? patch.net.knots_eta()
                                  : patch.net.knots_xi();
    const std::vector<double> bp = along.breakpoints();
    for (size_t span = 0; span + 1 < bp.size(); ++span) {
      const QuadratureRule q = gauss_legendre(points, bp[span], bp[span + 1]);
      for (int i = 0; i < points; ++i) {
        const double s = q.points[i];
        const auto [xi, eta] = edge_point(e.edge.side, s);
        const TractionOperator t = traction_operator(patch, e.edge.side, s);
        const double arc = edge_arc_factor(patch.mapping, e.edge.side, xi, eta);
        const Eigen::Vector2d u = e.displacement(s);
        const double wt = q.weights[i] * arc;
        // W* = -integral u . t dGamma, affine in the control variables.
        form.g -= wt * dofs.embed(e.edge.patch, u.x() * t.rows.row(0) + u.y() * t.rows.row(1))
                           .transpose();
        form.c -= wt * u.dot(t.offset);
      }
    }
  }
  return form;
}

} // namespace airy
