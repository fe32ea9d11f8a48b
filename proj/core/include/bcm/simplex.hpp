#pragma once

#include <Eigen/Core>

namespace bcm {

/// Barycentric coordinates: a point on the probability simplex.
/// Entries must be nonnegative and sum to 1 within 1e-10.
struct Coordinates {
  Eigen::VectorXd lambda;

  explicit Coordinates(Eigen::VectorXd l);

  static Coordinates uniform(int p);

  int size() const { return static_cast<int>(lambda.size()); }
  double operator()(int i) const { return lambda(i); }
};

/// Euclidean projection onto the probability simplex (sorted-threshold rule).
Coordinates project_simplex(const Eigen::VectorXd& v);

}  // namespace bcm
