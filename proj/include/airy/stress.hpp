#pragma once

#include <Eigen/Dense>
#include <vector>

#include "airy/geometry.hpp"
#include "airy/material.hpp"
#include "airy/spline.hpp"

namespace airy {

// One mapped patch carrying a stress-function net and its material data.
struct Patch {
  Mapping mapping;
  ControlNet net;
  Compliance material;
  Potential potential;
};

struct EdgeRef {
  int patch = 0;
  Side side = Side::XiMin;
};

// Global indexing over the concatenated per-patch control variables.
class DofMap {
public:
  explicit DofMap(const std::vector<Patch>& patches);

  int total() const { return total_; }
  int patch_count() const { return static_cast<int>(offsets_.size()); }
  int offset(int patch) const { return offsets_[patch]; }
  int size_of(int patch) const { return sizes_[patch]; }
  int global(int patch, int local) const { return offsets_[patch] + local; }

  // Embeds a patch-local row into a global-length row.
  Eigen::RowVectorXd embed(int patch, const Eigen::RowVectorXd& local) const;

private:
  std::vector<int> offsets_;
  std::vector<int> sizes_;
  int total_ = 0;
};

// Stress as an affine functional of the patch's control variables:
// sigma = rows * phi + offset with sigma = (sxx, syy, sxy). The offset is
// the body-force potential entering both normal components.
struct StressOperator {
  Eigen::Matrix<double, 3, Eigen::Dynamic> rows;
  Eigen::Vector3d offset;
};

StressOperator stress_operator(const Patch& p, double xi, double eta);

// Stress evaluated from the patch's current control values.
Eigen::Vector3d stress_at(const Patch& p, double xi, double eta);

// Boundary traction t = sigma . n as an affine functional of the patch's
// control variables, using the physical outward unit normal.
struct TractionOperator {
  Eigen::Matrix<double, 2, Eigen::Dynamic> rows;
  Eigen::Vector2d offset;
};

TractionOperator traction_operator(const Patch& p, Side side, double s);

Eigen::Vector2d traction_at(const Patch& p, Side side, double s);

} // namespace airy
