#include "bcm/inpaint.hpp"

#include <algorithm>
#include <numeric>
#include <optional>
#include <random>

#include "bcm/analysis.hpp"
#include "bcm/error.hpp"
#include "bcm/parallel.hpp"
#include "bcm/rng.hpp"

namespace bcm {

double grid_w2_sq(const GridMeasure& a, const GridMeasure& b, double epsilon, int max_iters,
                  double tol) {
  const PointCloud ca = grid_to_cloud(a);
  const PointCloud cb = grid_to_cloud(b);
  const Eigen::MatrixXd cost = squared_cost_matrix(ca, cb, false);
  SinkhornOptions opts;
  opts.half_cost = false;
  opts.tol = tol;
  opts.max_iters = max_iters;
  const double scale = cost.maxCoeff();
  if (scale / epsilon > 50.0) opts.anneal_from = scale / 8.0;
  const SinkhornResult res = sinkhorn(ca, cb, epsilon, opts);
  return entropic_cost(res.plan, cost);
}

namespace {

GridMeasure corrupt_query(const GridMeasure& clean, const InpaintConfig& config,
                          std::uint64_t noise_seed) {
  if (config.mode == InpaintConfig::Mode::Occlude) {
    return corrupt_occlude(clean,
                           central_block(clean.height(), clean.width(), config.occlude_side));
  }
  return corrupt_noise(clean, config.alpha, noise_seed);
}

GridMeasure corrupt_reference(const GridMeasure& clean, const InpaintConfig& config) {
  if (config.mode == InpaintConfig::Mode::Occlude) {
    return corrupt_occlude(clean,
                           central_block(clean.height(), clean.width(), config.occlude_side));
  }
  return corrupt_noise_expected(clean, config.alpha);
}

}  // namespace

std::vector<InpaintTrialResult> run_inpaint_experiment(const InpaintConfig& config) {
  if (config.trials <= 0) throw ConfigError("inpaint experiment: trials must be positive");
  if (config.refs <= 0) throw ConfigError("inpaint experiment: refs must be positive");
  if (!config.images.empty() &&
      static_cast<int>(config.images.size()) < config.refs + 1) {
    throw ConfigError("inpaint experiment: need at least refs + 1 images");
  }

  std::vector<std::optional<InpaintTrialResult>> slots(config.trials);
  parallel_for(config.trials, config.threads, [&](int trial) {
    auto rng = make_stream(config.seed, static_cast<std::uint64_t>(trial));
    const std::uint64_t noise_seed = rng();

    // Assemble the clean query and references for this trial.
    std::vector<GridMeasure> clean;
    clean.reserve(config.refs + 1);
    if (config.images.empty()) {
      const auto family = synthetic_blob_family(config.refs + 1, rng());
      for (const auto& img : family) clean.push_back(image_to_measure(img));
    } else {
      std::vector<int> order(config.images.size());
      std::iota(order.begin(), order.end(), 0);
      std::shuffle(order.begin(), order.end(), rng);
      for (int i = 0; i <= config.refs; ++i) {
        clean.push_back(image_to_measure(config.images[order[i]]));
      }
    }
    const GridMeasure& query = clean.front();
    const std::vector<GridMeasure> refs(clean.begin() + 1, clean.end());

    const GridMeasure corrupted = corrupt_query(query, config, noise_seed);
    std::vector<GridMeasure> corrupted_refs;
    corrupted_refs.reserve(refs.size());
    for (const auto& r : refs) corrupted_refs.push_back(corrupt_reference(r, config));

    // Coordinates from the corrupted measures (the clean ones are unseen).
    const PointCloud query_cloud = grid_to_cloud(corrupted);
    std::vector<PointCloud> ref_clouds;
    ref_clouds.reserve(refs.size());
    for (const auto& r : corrupted_refs) ref_clouds.push_back(grid_to_cloud(r));
    const CoordinateEstimate estimate =
        estimate_coords(query_cloud, ref_clouds, config.epsilon, config.sinkhorn, config.qp);

    const GridMeasure bcm_recon =
        ibp_barycenter(estimate.solution.lambda, refs, config.epsilon, config.ibp);
    auto [lambda_linear, linear_recon] = linear_recovery(corrupted, corrupted_refs, refs);

    const double w2sq_bcm = grid_w2_sq(query, bcm_recon, config.score_epsilon,
                                       config.sinkhorn.max_iters, config.sinkhorn.tol);
    const double w2sq_linear = grid_w2_sq(query, linear_recon, config.score_epsilon,
                                          config.sinkhorn.max_iters, config.sinkhorn.tol);

    slots[trial] = InpaintTrialResult{trial,
                                      query,
                                      corrupted,
                                      bcm_recon,
                                      linear_recon,
                                      estimate.solution.lambda,
                                      lambda_linear,
                                      w2sq_bcm,
                                      w2sq_linear};
  });

  std::vector<InpaintTrialResult> results;
  results.reserve(config.trials);
  for (auto& slot : slots) results.push_back(std::move(*slot));
  return results;
}

}  // namespace bcm
