#pragma once

#include <Eigen/Core>

#include "bcm/point_cloud.hpp"

namespace bcm {

/// Probability measure on a pixel grid: nonnegative mass summing to 1.
struct GridMeasure {
  Eigen::MatrixXd mass;  // H x W

  explicit GridMeasure(Eigen::MatrixXd m);

  int height() const { return static_cast<int>(mass.rows()); }
  int width() const { return static_cast<int>(mass.cols()); }
};

/// Point-cloud view of a grid measure: pixel (i, j) sits at coordinates (i, j)
/// with its mass as weight. Zero-mass pixels are dropped.
PointCloud grid_to_cloud(const GridMeasure& g);

}  // namespace bcm
