#include <benchmark/benchmark.h>

#include <Eigen/Dense>

#include "bcm/entropic.hpp"
#include "bcm/gram.hpp"
#include "bcm/qp.hpp"
#include "bcm/rng.hpp"
#include "bcm/spd.hpp"
#include "bcm/synthesis.hpp"

namespace {

bcm::SpdMatrix random_spd(int d, std::uint64_t seed) {
  auto rng = bcm::make_stream(seed);
  const Eigen::MatrixXd g = bcm::sample_standard_normal(rng, d, d);
  return bcm::SpdMatrix(g * g.transpose() / d + 0.5 * Eigen::MatrixXd::Identity(d, d));
}

void BM_SqrtSpdEigen(benchmark::State& state) {
  const auto s = random_spd(static_cast<int>(state.range(0)), 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(bcm::sqrt_spd(s));
  }
}
BENCHMARK(BM_SqrtSpdEigen)->Arg(8)->Arg(32)->Arg(128);

void BM_SqrtSpdNewtonSchulz(benchmark::State& state) {
  const auto s = random_spd(static_cast<int>(state.range(0)), 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(bcm::sqrt_spd_newton_schulz(s));
  }
}
BENCHMARK(BM_SqrtSpdNewtonSchulz)->Arg(8)->Arg(32)->Arg(128);

void BM_SinkhornLogDomain(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto rng = bcm::make_stream(2);
  const auto a = bcm::PointCloud::uniform(bcm::sample_standard_normal(rng, n, 2));
  const auto b = bcm::PointCloud::uniform(bcm::sample_standard_normal(rng, n, 2));
  for (auto _ : state) {
    benchmark::DoNotOptimize(bcm::sinkhorn(a, b, 1.0, {}));
  }
}
BENCHMARK(BM_SinkhornLogDomain)->Arg(32)->Arg(128)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_SimplexQp(benchmark::State& state) {
  const int p = static_cast<int>(state.range(0));
  auto rng = bcm::make_stream(3);
  const Eigen::MatrixXd g = bcm::sample_standard_normal(rng, p, p);
  const bcm::GramMatrix a(g * g.transpose() / p);
  for (auto _ : state) {
    benchmark::DoNotOptimize(bcm::solve_simplex_qp(a));
  }
}
BENCHMARK(BM_SimplexQp)->Arg(4)->Arg(16)->Arg(64);

void BM_IbpBarycenter(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(side, side);
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(side, side);
  for (int i = 0; i < side; ++i) {
    for (int j = 0; j < side; ++j) {
      a(i, j) = std::exp(-0.1 * ((i - side / 4.0) * (i - side / 4.0) + j * j));
      b(i, j) = std::exp(-0.1 * ((i - 3.0 * side / 4.0) * (i - 3.0 * side / 4.0) +
                                 (j - side / 2.0) * (j - side / 2.0)));
    }
  }
  const bcm::GridMeasure ga(a / a.sum());
  const bcm::GridMeasure gb(b / b.sum());
  bcm::IbpOptions opts;
  opts.tol = 1e-5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        bcm::ibp_barycenter(bcm::Coordinates::uniform(2), {ga, gb}, 2.0, opts));
  }
}
BENCHMARK(BM_IbpBarycenter)->Arg(12)->Arg(28)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
