#include "bcm/image_measures.hpp"

#include <cmath>
#include <random>
#include <string>

#include "bcm/error.hpp"
#include "bcm/gram.hpp"
#include "bcm/qp.hpp"
#include "bcm/rng.hpp"

namespace bcm {

RawImage::RawImage(Eigen::MatrixXi px) : pixels(std::move(px)) {
  if (pixels.rows() == 0 || pixels.cols() == 0) throw ValidationError("RawImage: empty image");
  if (pixels.minCoeff() < 0 || pixels.maxCoeff() > 255) {
    throw ValidationError("RawImage: intensities outside [0, 255]");
  }
}

GridMeasure image_to_measure(const RawImage& img) {
  const double total = img.pixels.cast<double>().sum();
  if (total <= 0.0) throw ValidationError("image_to_measure: all-black image has zero mass");
  return GridMeasure(img.pixels.cast<double>() / total);
}

GridMeasure corrupt_noise(const GridMeasure& m, double alpha, std::uint64_t seed) {
  if (alpha < 0.0 || alpha > 1.0) {
    throw ValidationError("corrupt_noise: alpha must lie in [0, 1], got " +
                          std::to_string(alpha));
  }
  auto rng = make_stream(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Eigen::MatrixXd zeta(m.height(), m.width());
  for (int i = 0; i < m.height(); ++i)
    for (int j = 0; j < m.width(); ++j) zeta(i, j) = unif(rng);
  zeta /= zeta.sum();
  return GridMeasure((1.0 - alpha) * m.mass + alpha * zeta);
}

GridMeasure corrupt_noise_expected(const GridMeasure& m, double alpha) {
  if (alpha < 0.0 || alpha > 1.0) {
    throw ValidationError("corrupt_noise_expected: alpha must lie in [0, 1]");
  }
  const double cell = 1.0 / (static_cast<double>(m.height()) * m.width());
  return GridMeasure((1.0 - alpha) * m.mass.array() + alpha * cell);
}

Block central_block(int grid_height, int grid_width, int side) {
  return Block{(grid_height - side) / 2, (grid_width - side) / 2, side, side};
}

GridMeasure corrupt_occlude(const GridMeasure& m, const Block& block) {
  if (block.row0 < 0 || block.col0 < 0 || block.height < 0 || block.width < 0 ||
      block.row0 + block.height > m.height() || block.col0 + block.width > m.width()) {
    throw ValidationError("corrupt_occlude: block does not fit inside the grid");
  }
  Eigen::MatrixXd out = m.mass;
  out.block(block.row0, block.col0, block.height, block.width).setZero();
  const double remaining = out.sum();
  if (remaining <= 0.0) {
    throw ValidationError("corrupt_occlude: occlusion removes all mass");
  }
  return GridMeasure(out / remaining);
}

std::pair<Coordinates, GridMeasure> linear_recovery(const GridMeasure& corrupted,
                                                    const std::vector<GridMeasure>& fit_refs,
                                                    const std::vector<GridMeasure>& mix_refs) {
  const int p = static_cast<int>(fit_refs.size());
  if (p == 0) throw ValidationError("linear_recovery: no references");
  if (mix_refs.size() != fit_refs.size()) {
    throw DimensionError("linear_recovery: fit/mix reference counts differ");
  }
  for (const auto& r : fit_refs) {
    if (r.height() != corrupted.height() || r.width() != corrupted.width()) {
      throw DimensionError("linear_recovery: references on a different grid");
    }
  }
  // argmin over the simplex of ||m0 - sum_i l_i m_i||_F^2
  //   = l^T Q l - 2 b^T l + const, Q_ij = <m_i, m_j>, b_i = <m_i, m0>.
  Eigen::MatrixXd q(p, p);
  Eigen::VectorXd b(p);
  for (int i = 0; i < p; ++i) {
    b(i) = (fit_refs[i].mass.array() * corrupted.mass.array()).sum();
    for (int j = i; j < p; ++j) {
      q(i, j) = q(j, i) = (fit_refs[i].mass.array() * fit_refs[j].mass.array()).sum();
    }
  }
  const QpSolution sol = solve_simplex_qp(GramMatrix(q), Eigen::VectorXd(-2.0 * b));

  Eigen::MatrixXd mix = Eigen::MatrixXd::Zero(corrupted.height(), corrupted.width());
  for (int i = 0; i < p; ++i) mix += sol.lambda(i) * mix_refs[i].mass;
  mix /= mix.sum();
  return {sol.lambda, GridMeasure(std::move(mix))};
}

std::pair<Coordinates, GridMeasure> linear_recovery(const GridMeasure& corrupted,
                                                    const std::vector<GridMeasure>& refs) {
  return linear_recovery(corrupted, refs, refs);
}

std::vector<RawImage> synthetic_blob_family(int count, std::uint64_t seed) {
  if (count <= 0) throw ValidationError("synthetic_blob_family: count must be positive");
  constexpr int kSide = 28;
  auto rng = make_stream(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);

  // Family-level shape: center, principal axis lengths and orientation.
  const double base_row = 10.0 + 8.0 * unif(rng);
  const double base_col = 10.0 + 8.0 * unif(rng);
  const double base_sig_major = 2.4 + 1.6 * unif(rng);
  const double base_sig_minor = 1.2 + 0.8 * unif(rng);
  const double base_angle = 3.141592653589793 * unif(rng);

  std::vector<RawImage> family;
  family.reserve(count);
  for (int member = 0; member < count; ++member) {
    const double row_c = base_row + 1.5 * normal(rng);
    const double col_c = base_col + 1.5 * normal(rng);
    const double sig_major = base_sig_major * std::exp(0.15 * normal(rng));
    const double sig_minor = base_sig_minor * std::exp(0.15 * normal(rng));
    const double angle = base_angle + 0.25 * normal(rng);

    const double ca = std::cos(angle), sa = std::sin(angle);
    Eigen::MatrixXd density(kSide, kSide);
    for (int i = 0; i < kSide; ++i) {
      for (int j = 0; j < kSide; ++j) {
        const double dr = i - row_c, dc = j - col_c;
        const double major = ca * dr + sa * dc;
        const double minor = -sa * dr + ca * dc;
        density(i, j) = std::exp(-0.5 * (major * major / (sig_major * sig_major) +
                                         minor * minor / (sig_minor * sig_minor)));
      }
    }
    Eigen::MatrixXi pixels(kSide, kSide);
    const double peak = density.maxCoeff();
    for (int i = 0; i < kSide; ++i) {
      for (int j = 0; j < kSide; ++j) {
        const int v = static_cast<int>(std::lround(255.0 * density(i, j) / peak));
        // Trim the faint tail so supports stay compact, as handwritten strokes do.
        pixels(i, j) = v >= 8 ? v : 0;
      }
    }
    family.emplace_back(pixels);
  }
  return family;
}

}  // namespace bcm
