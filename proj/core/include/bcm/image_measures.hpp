#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <utility>
#include <vector>

#include "bcm/grid_measure.hpp"
#include "bcm/simplex.hpp"

namespace bcm {

/// 8-bit grayscale image; pixel intensities in [0, 255].
struct RawImage {
  Eigen::MatrixXi pixels;  // H x W

  explicit RawImage(Eigen::MatrixXi px);

  int height() const { return static_cast<int>(pixels.rows()); }
  int width() const { return static_cast<int>(pixels.cols()); }
};

/// Normalizes intensities to a probability measure on the grid.
/// Throws on all-black images.
GridMeasure image_to_measure(const RawImage& img);

/// Additive white noise: (1 - alpha) * m + alpha * zeta, where zeta is a
/// seeded Unif[0,1] pixel grid normalized to unit mass.
GridMeasure corrupt_noise(const GridMeasure& m, double alpha, std::uint64_t seed);

/// Reference-side noise variant: mixes with the expectation of the noise
/// measure, i.e. the uniform grid.
GridMeasure corrupt_noise_expected(const GridMeasure& m, double alpha);

struct Block {
  int row0, col0, height, width;
};

/// Central block of the given side length (the occlusion window).
Block central_block(int grid_height, int grid_width, int side);

/// Zeroes the block and renormalizes the remaining mass.
/// Throws when the occlusion removes all mass.
GridMeasure corrupt_occlude(const GridMeasure& m, const Block& block);

/// Euclidean projection of the corrupted measure onto the convex hull of the
/// fit references (Frobenius norm), then reconstruction as the same convex
/// combination of the mix references.
std::pair<Coordinates, GridMeasure> linear_recovery(const GridMeasure& corrupted,
                                                    const std::vector<GridMeasure>& fit_refs,
                                                    const std::vector<GridMeasure>& mix_refs);

/// Convenience overload fitting and mixing against the same references.
std::pair<Coordinates, GridMeasure> linear_recovery(const GridMeasure& corrupted,
                                                    const std::vector<GridMeasure>& refs);

/// Seeded family of 28x28 anisotropic Gaussian blob images. Members share a
/// family center and shape with per-image jitter, so they behave like repeated
/// drawings of one digit class. Offline stand-in when MNIST files are absent.
std::vector<RawImage> synthetic_blob_family(int count, std::uint64_t seed);

}  // namespace bcm
