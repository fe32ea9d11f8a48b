#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "bcm/entropic.hpp"
#include "bcm/simplex.hpp"

namespace bcm {

/// Study of how well the sampled Gram matrix approximates the exact one on a
/// synthetic family with known transport maps.
struct ConvergenceConfig {
  enum class Family { Gaussian, Sorted1D };
  // Sampled: entropic maps for the Gaussian family, monotone rearrangements
  // for the 1D family. Exact: closed-form maps, no sampling.
  enum class Estimator { Sampled, Exact };

  Family family = Family::Gaussian;
  Estimator estimator = Estimator::Sampled;
  int d = 2;  // ambient dimension (Gaussian family only)
  int p = 2;
  std::optional<Eigen::VectorXd> lambda{};  // planted coordinates; sampled when absent
  std::vector<int> sample_sizes{100, 400, 1600};
  int seeds = 10;
  std::uint64_t seed = 0;
  int threads = 1;
  // Entropic regularization schedule: fixed epsilon when set, otherwise
  // epsilon_scale * n^{-1/6}.
  std::optional<double> epsilon{};
  double epsilon_scale = 3.0;
  SinkhornOptions sinkhorn{.tol = 1e-7, .max_iters = 20000, .half_cost = true,
                           .anneal_from = 0.0};
};

struct ConvergenceRow {
  int n;
  double epsilon;
  double median_entry_err;   // median over seeds of max-entry |A_hat - A|
  double median_lambda_err;  // median over seeds of ||lambda_hat - lambda*||_2
};

std::vector<ConvergenceRow> run_convergence_study(const ConvergenceConfig& config);

}  // namespace bcm
