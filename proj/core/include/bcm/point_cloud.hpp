#pragma once

#include <Eigen/Core>

namespace bcm {

/// Weighted finite support of a measure in R^d: n points with a PMF over them.
/// Weights must be nonnegative and sum to 1 within 1e-12. Zero-weight points
/// are allowed; transport routines ignore them.
struct PointCloud {
  Eigen::MatrixXd points;   // n x d
  Eigen::VectorXd weights;  // length n

  PointCloud(Eigen::MatrixXd pts, Eigen::VectorXd w);

  static PointCloud uniform(Eigen::MatrixXd pts);

  int size() const { return static_cast<int>(points.rows()); }
  int dim() const { return static_cast<int>(points.cols()); }
};

}  // namespace bcm
