#pragma once

#include <Eigen/Core>
#include <vector>

#include "bcm/grid_measure.hpp"
#include "bcm/simplex.hpp"

namespace bcm {

/// Empirical measure on the line with uniform weights, stored by order
/// statistics. Ties keep their input order (stable sort).
struct Sorted1DSample {
  Eigen::VectorXd values;  // nondecreasing

  explicit Sorted1DSample(Eigen::VectorXd v);

  int size() const { return static_cast<int>(values.size()); }
};

/// Monotone rearrangement between equal-count uniform samples: rank k of the
/// source is sent to rank k of the destination. This is the 1D optimal map.
Eigen::VectorXd monotone_map_1d(const Sorted1DSample& src, const Sorted1DSample& dst);

/// Barycenter of compatible 1D samples: rank-wise convex combination of the
/// reference order statistics.
Sorted1DSample quantile_barycenter_1d(const Coordinates& lambda,
                                      const std::vector<Sorted1DSample>& refs);

struct IbpOptions {
  int max_iters = 5000;
  double tol = 1e-7;  // l1 distance between successive barycenter iterates
};

/// Entropic barycenter of grid measures by iterative Bregman projections with
/// the shared squared-distance grid cost (unit pixel spacing). Runs in the log
/// domain so small epsilon does not underflow the kernel.
GridMeasure ibp_barycenter(const Coordinates& lambda, const std::vector<GridMeasure>& refs,
                           double epsilon, const IbpOptions& opts = {});

}  // namespace bcm
