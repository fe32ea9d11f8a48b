#pragma once

#include <cstdint>
#include <vector>

#include "bcm/spd.hpp"

namespace bcm {

struct CovarianceExperimentConfig {
  int p = 6;
  int d = 10;
  std::vector<int> sample_sizes{10, 30, 100, 300, 1000};
  int trials = 50;
  std::uint64_t seed = 0;
  int threads = 1;
  double barycenter_tol = 1e-9;
  int barycenter_max_iters = 500;
};

struct CovarianceTrialRow {
  int n;
  int trial;
  double w2_bcm;        // W2 between the true barycenter and the BCM estimate
  double w2_empirical;  // W2 between the true barycenter and the empirical covariance
  double lambda_err;    // sup-norm error of the recovered coordinates
};

/// Covariance estimation under the barycentric coding model. Each trial draws
/// coordinates uniformly on the simplex and shifted-Wishart references
/// (G G^T / d + 0.5 I), synthesizes the true barycenter, then for every sample
/// size draws Gaussian samples, forms the empirical covariance, recovers
/// coordinates through the closed-form Gram matrix, and scores both estimates
/// in Bures-Wasserstein distance. Trials run on per-trial seeded streams and
/// may execute in parallel; row order is deterministic.
std::vector<CovarianceTrialRow> run_covariance_experiment(
    const CovarianceExperimentConfig& config);

/// Shifted Wishart draw used for reference covariances.
SpdMatrix sample_wishart_shifted(std::uint64_t seed, std::uint64_t stream, int d);

}  // namespace bcm
