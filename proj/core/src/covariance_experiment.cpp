#include "bcm/covariance_experiment.hpp"

#include <cmath>

#include "bcm/analysis.hpp"
#include "bcm/error.hpp"
#include "bcm/gaussian.hpp"
#include "bcm/parallel.hpp"
#include "bcm/rng.hpp"

namespace bcm {

namespace {

SpdMatrix wishart_shifted(std::mt19937_64& rng, int d) {
  const Eigen::MatrixXd g = sample_standard_normal(rng, d, d);
  return SpdMatrix(g * g.transpose() / static_cast<double>(d) +
                   0.5 * Eigen::MatrixXd::Identity(d, d));
}

}  // namespace

SpdMatrix sample_wishart_shifted(std::uint64_t seed, std::uint64_t stream, int d) {
  auto rng = make_stream(seed, stream);
  return wishart_shifted(rng, d);
}

std::vector<CovarianceTrialRow> run_covariance_experiment(
    const CovarianceExperimentConfig& config) {
  if (config.trials <= 0) throw ConfigError("covariance experiment: trials must be positive");
  if (config.p <= 0 || config.d <= 0) {
    throw ConfigError("covariance experiment: p and d must be positive");
  }
  if (config.sample_sizes.empty()) {
    throw ConfigError("covariance experiment: empty sample size sweep");
  }
  for (const int n : config.sample_sizes) {
    if (n <= 0) throw ConfigError("covariance experiment: sample sizes must be positive");
  }

  const int per_trial = static_cast<int>(config.sample_sizes.size());
  std::vector<CovarianceTrialRow> rows(static_cast<std::size_t>(config.trials) * per_trial);

  parallel_for(config.trials, config.threads, [&](int trial) {
    auto rng = make_stream(config.seed, static_cast<std::uint64_t>(trial));

    const Coordinates lambda_true(sample_uniform_simplex(rng, config.p));
    std::vector<SpdMatrix> refs;
    refs.reserve(config.p);
    for (int i = 0; i < config.p; ++i) refs.push_back(wishart_shifted(rng, config.d));

    const BarycenterResult truth = gaussian_barycenter(lambda_true, refs, config.barycenter_tol,
                                                       config.barycenter_max_iters);
    const Eigen::MatrixXd root = sqrt_spd(truth.cov).matrix();

    for (int s = 0; s < per_trial; ++s) {
      const int n = config.sample_sizes[s];
      const Eigen::MatrixXd samples = sample_standard_normal(rng, n, config.d) * root;
      const SpdMatrix empirical(samples.transpose() * samples / static_cast<double>(n));

      const CoordinateEstimate estimate = estimate_coords_gaussian(empirical, refs);
      const BarycenterResult fitted =
          gaussian_barycenter(estimate.solution.lambda, refs, config.barycenter_tol,
                              config.barycenter_max_iters);

      CovarianceTrialRow row;
      row.n = n;
      row.trial = trial;
      row.w2_bcm = std::sqrt(bures_w2_sq(truth.cov, fitted.cov));
      row.w2_empirical = std::sqrt(bures_w2_sq(truth.cov, empirical));
      row.lambda_err =
          (estimate.solution.lambda.lambda - lambda_true.lambda).cwiseAbs().maxCoeff();
      rows[static_cast<std::size_t>(trial) * per_trial + s] = row;
    }
  });
  return rows;
}

}  // namespace bcm
