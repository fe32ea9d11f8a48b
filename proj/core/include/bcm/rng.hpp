#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <random>

namespace bcm {

/// splitmix64 step; used to scramble (seed, stream) pairs into generator seeds.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Independent generator for (seed, stream). Parallel trials each take their own
/// stream index so they never share generator state.
inline std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t stream = 0) {
  std::uint64_t s = seed ^ (0x9e3779b97f4a7c15ULL * (stream + 1));
  const std::uint64_t a = splitmix64(s);
  const std::uint64_t b = splitmix64(s);
  const std::uint64_t c = splitmix64(s);
  const std::uint64_t d = splitmix64(s);
  std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                    static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32),
                    static_cast<std::uint32_t>(c), static_cast<std::uint32_t>(c >> 32),
                    static_cast<std::uint32_t>(d), static_cast<std::uint32_t>(d >> 32)};
  return std::mt19937_64(seq);
}

inline Eigen::MatrixXd sample_standard_normal(std::mt19937_64& rng, int rows, int cols) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = normal(rng);
  return m;
}

/// Uniform draw from the probability simplex (normalized exponential spacings).
inline Eigen::VectorXd sample_uniform_simplex(std::mt19937_64& rng, int p) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Eigen::VectorXd v(p);
  for (int i = 0; i < p; ++i) v(i) = -std::log(1.0 - unif(rng));
  return v / v.sum();
}

}  // namespace bcm
