#include "bcm/point_cloud.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "bcm/error.hpp"

namespace bcm {

PointCloud::PointCloud(Eigen::MatrixXd pts, Eigen::VectorXd w)
    : points(std::move(pts)), weights(std::move(w)) {
  if (points.rows() == 0 || points.cols() == 0) {
    throw ValidationError("PointCloud: empty support");
  }
  if (weights.size() != points.rows()) {
    throw DimensionError("PointCloud: " + std::to_string(points.rows()) + " points but " +
                         std::to_string(weights.size()) + " weights");
  }
  if (weights.minCoeff() < 0.0) {
    throw ValidationError("PointCloud: negative weight " + std::to_string(weights.minCoeff()));
  }
  if (std::abs(weights.sum() - 1.0) > 1e-12) {
    throw ValidationError("PointCloud: weights sum to " + std::to_string(weights.sum()));
  }
}

PointCloud PointCloud::uniform(Eigen::MatrixXd pts) {
  const auto n = pts.rows();
  return PointCloud(std::move(pts), Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n)));
}

}  // namespace bcm
