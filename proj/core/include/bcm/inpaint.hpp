#pragma once

#include <cstdint>
#include <vector>

#include "bcm/entropic.hpp"
#include "bcm/image_measures.hpp"
#include "bcm/qp.hpp"
#include "bcm/synthesis.hpp"

namespace bcm {

/// W2^2 surrogate between grid measures: plan cost of an entropic solve on
/// the pixel clouds at the given epsilon (annealed from the cost scale).
double grid_w2_sq(const GridMeasure& a, const GridMeasure& b, double epsilon,
                  int max_iters = 200000, double tol = 1e-7);

struct InpaintConfig {
  enum class Mode { Occlude, Noise };
  Mode mode = Mode::Occlude;
  double alpha = 0.5;  // noise mixing weight
  int refs = 10;
  int trials = 1;
  std::uint64_t seed = 0;
  double epsilon = 10.0;        // Gram estimation and barycenter synthesis
  double score_epsilon = 0.1;   // reporting surrogate on pixel units
  int occlude_side = 8;
  int threads = 1;
  // Annealed by default: pixel costs reach ~1.5e3 while epsilon sits near 10.
  SinkhornOptions sinkhorn{.tol = 1e-7, .max_iters = 50000, .half_cost = false,
                           .anneal_from = 256.0};
  IbpOptions ibp{};
  QpOptions qp{};
  // When nonempty, trials sample query and references from these images;
  // otherwise each trial generates a fresh synthetic blob family.
  std::vector<RawImage> images{};
};

struct InpaintTrialResult {
  int trial;
  GridMeasure clean;
  GridMeasure corrupted;
  GridMeasure bcm_reconstruction;
  GridMeasure linear_reconstruction;
  Coordinates lambda_bcm;
  Coordinates lambda_linear;
  double w2sq_bcm;
  double w2sq_linear;
};

/// Image recovery under the barycentric coding model. Per trial: corrupt the
/// query and references, estimate coordinates from the corrupted measures,
/// reconstruct as the entropic barycenter of the clean references, and score
/// against the Euclidean-projection baseline. Deterministic per-trial streams.
std::vector<InpaintTrialResult> run_inpaint_experiment(const InpaintConfig& config);

}  // namespace bcm
