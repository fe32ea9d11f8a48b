#include "bcm/grid_measure.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "bcm/error.hpp"

namespace bcm {

GridMeasure::GridMeasure(Eigen::MatrixXd m) : mass(std::move(m)) {
  if (mass.rows() == 0 || mass.cols() == 0) throw ValidationError("GridMeasure: empty grid");
  if (mass.minCoeff() < 0.0) {
    throw ValidationError("GridMeasure: negative mass " + std::to_string(mass.minCoeff()));
  }
  if (std::abs(mass.sum() - 1.0) > 1e-10) {
    throw ValidationError("GridMeasure: total mass " + std::to_string(mass.sum()));
  }
}

PointCloud grid_to_cloud(const GridMeasure& g) {
  int count = 0;
  for (int i = 0; i < g.height(); ++i)
    for (int j = 0; j < g.width(); ++j)
      if (g.mass(i, j) > 0.0) ++count;
  if (count == 0) throw ValidationError("grid_to_cloud: measure with empty support");
  Eigen::MatrixXd points(count, 2);
  Eigen::VectorXd weights(count);
  int r = 0;
  for (int i = 0; i < g.height(); ++i) {
    for (int j = 0; j < g.width(); ++j) {
      if (g.mass(i, j) > 0.0) {
        points(r, 0) = static_cast<double>(i);
        points(r, 1) = static_cast<double>(j);
        weights(r) = g.mass(i, j);
        ++r;
      }
    }
  }
  // Guard the PMF constraint against accumulation error on large grids.
  weights /= weights.sum();
  return PointCloud(std::move(points), std::move(weights));
}

}  // namespace bcm
