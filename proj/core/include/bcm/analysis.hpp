#pragma once

#include <vector>

#include "bcm/entropic.hpp"
#include "bcm/gram.hpp"
#include "bcm/qp.hpp"
#include "bcm/synthesis.hpp"

namespace bcm {

/// Result of solving the analysis problem: coordinates whose barycenter best
/// matches the query, the Gram matrix behind them, and the achieved objective.
struct CoordinateEstimate {
  QpSolution solution;
  GramMatrix gram;
};

/// Sample-based analysis on point clouds: per reference, solve entropic
/// transport at the given epsilon (unhalved squared-distance costs), take the
/// barycentric projection as the transport estimate, assemble the weighted
/// displacement Gram matrix on the query support, and minimize the quadratic
/// form over the simplex. Reference solves run on up to `threads` workers.
CoordinateEstimate estimate_coords(const PointCloud& query, const std::vector<PointCloud>& refs,
                                   double epsilon, const SinkhornOptions& sinkhorn_opts = {},
                                   const QpOptions& qp_opts = {}, int threads = 1);

/// Exact analysis for compatible 1D samples via monotone rearrangement maps.
CoordinateEstimate estimate_coords_exact_1d(const Sorted1DSample& query,
                                            const std::vector<Sorted1DSample>& refs,
                                            const QpOptions& qp_opts = {});

/// Closed-form analysis for zero-mean Gaussians.
CoordinateEstimate estimate_coords_gaussian(const SpdMatrix& s0,
                                            const std::vector<SpdMatrix>& refs,
                                            const QpOptions& qp_opts = {});

}  // namespace bcm
