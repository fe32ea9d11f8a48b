#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <vector>

#include "bcm/entropic.hpp"
#include "bcm/error.hpp"
#include "bcm/rng.hpp"
#include "doctest.h"
#include "test_helpers.hpp"

using bcm::PointCloud;
using bcm::sinkhorn;
using bcm::SinkhornOptions;
using bcm::squared_cost_matrix;
using bcm_test::random_cloud;

namespace {

PointCloud line_cloud(std::initializer_list<double> xs) {
  Eigen::MatrixXd pts(static_cast<int>(xs.size()), 1);
  int i = 0;
  for (double x : xs) pts(i++, 0) = x;
  return PointCloud::uniform(pts);
}

// Test-local exponential-domain scaling recursion; the long-run oracle for the
// solver's plan.
struct ScalingOracle {
  Eigen::MatrixXd kernel;
  Eigen::VectorXd a, b, u, v;

  ScalingOracle(const PointCloud& pa, const PointCloud& pb, double eps, bool half)
      : kernel((-squared_cost_matrix(pa, pb, half) / eps).array().exp().matrix()),
        a(pa.weights),
        b(pb.weights),
        u(Eigen::VectorXd::Ones(pa.size())),
        v(Eigen::VectorXd::Ones(pb.size())) {}

  void iterate(int count) {
    for (int i = 0; i < count; ++i) {
      u = a.cwiseQuotient(kernel * v);
      v = b.cwiseQuotient(kernel.transpose() * u);
    }
  }

  Eigen::MatrixXd plan() const { return u.asDiagonal() * kernel * v.asDiagonal(); }
};

}  // namespace

TEST_CASE("squared_cost_matrix basic values and naive-loop oracle") {
  Eigen::MatrixXd x(1, 2), y(1, 2);
  x << 0.0, 0.0;
  y << 3.0, 4.0;
  const auto a = PointCloud::uniform(x);
  const auto b = PointCloud::uniform(y);
  CHECK(squared_cost_matrix(a, b, false)(0, 0) == doctest::Approx(25.0).epsilon(1e-15));
  CHECK(squared_cost_matrix(a, b, true)(0, 0) == doctest::Approx(12.5).epsilon(1e-15));

  auto rng = bcm::make_stream(21);
  const auto c = random_cloud(rng, 7, 3, false);
  CHECK(squared_cost_matrix(c, c, false).diagonal().cwiseAbs().maxCoeff() < 1e-12);

  const auto d = random_cloud(rng, 5, 3, false);
  const Eigen::MatrixXd m = squared_cost_matrix(c, d, false);
  for (int i = 0; i < c.size(); ++i) {
    for (int j = 0; j < d.size(); ++j) {
      double direct = 0.0;
      for (int k = 0; k < 3; ++k) {
        const double diff = c.points(i, k) - d.points(j, k);
        direct += diff * diff;
      }
      CHECK(m(i, j) == doctest::Approx(direct).epsilon(1e-12));
    }
  }

  Eigen::MatrixXd y3(1, 3);
  y3.setZero();
  CHECK_THROWS_AS(squared_cost_matrix(a, PointCloud::uniform(y3), false), bcm::DimensionError);
}

TEST_CASE("sinkhorn single pair: forced normalization") {
  Eigen::MatrixXd x(1, 1), y(1, 1);
  x << 0.0;
  y << 2.0;
  const auto a = PointCloud::uniform(x);
  const auto b = PointCloud::uniform(y);
  const auto res = sinkhorn(a, b, 0.7, {});
  const double m11 = 0.5 * 4.0;  // half-cost convention
  CHECK(res.plan.matrix(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(res.potentials.f(0) == doctest::Approx(m11 / 2.0).epsilon(1e-10));
  CHECK(res.potentials.g(0) == doctest::Approx(m11 / 2.0).epsilon(1e-10));
}

TEST_CASE("sinkhorn symmetric two-point instance") {
  const auto a = line_cloud({-1.0, 1.0});
  const auto b = line_cloud({-1.0, 1.0});
  const auto res = sinkhorn(a, b, 0.5, {});
  CHECK(res.potentials.f(0) == doctest::Approx(res.potentials.f(1)).epsilon(1e-12));
  CHECK(res.potentials.g(0) == doctest::Approx(res.potentials.g(1)).epsilon(1e-12));
  CHECK(res.plan.matrix(0, 0) == doctest::Approx(res.plan.matrix(1, 1)).epsilon(1e-10));
  CHECK(res.plan.matrix(0, 1) == doctest::Approx(res.plan.matrix(1, 0)).epsilon(1e-10));
  CHECK(res.plan.matrix.row(0).sum() == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("sinkhorn matches the long-run scaling oracle") {
  auto rng = bcm::make_stream(22);
  const auto a = random_cloud(rng, 3, 2, true);
  const auto b = random_cloud(rng, 3, 2, true);
  ScalingOracle oracle(a, b, 0.5, true);
  oracle.iterate(10000);
  const Eigen::MatrixXd expected = oracle.plan();

  SinkhornOptions opts;
  opts.tol = 1e-12;
  const auto res = sinkhorn(a, b, 0.5, opts);
  CHECK((res.plan.matrix - expected).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("sinkhorn marginal feasibility and dense plans on seeded instances") {
  auto rng = bcm::make_stream(23);
  for (int rep = 0; rep < 5; ++rep) {
    const auto a = random_cloud(rng, 10 + rep, 3, false);
    const auto b = random_cloud(rng, 14 - rep, 3, false);
    for (double eps : {0.5, 2.0}) {
      const auto res = sinkhorn(a, b, eps, {});
      const double row_res = (res.plan.matrix.rowwise().sum() - a.weights).cwiseAbs().sum();
      const double col_res =
          (res.plan.matrix.colwise().sum().transpose() - b.weights).cwiseAbs().sum();
      CHECK(row_res < 1e-6);
      CHECK(col_res < 1e-6);
      // Entropic plans are dense: every entry on the support is positive.
      CHECK(res.plan.matrix.minCoeff() > 0.0);
    }
  }
}

TEST_CASE("sinkhorn normalization identities hold at tight tolerance") {
  auto rng = bcm::make_stream(24);
  const auto a = random_cloud(rng, 8, 2, false);
  const auto b = random_cloud(rng, 11, 2, false);
  SinkhornOptions opts;
  opts.tol = 1e-9;
  const auto res = sinkhorn(a, b, 1.0, opts);
  CHECK(bcm::potential_identity_residual(res.potentials, a, b) < 1e-6);
}

TEST_CASE("sinkhorn iteration-limit error carries the residual") {
  auto rng = bcm::make_stream(25);
  const auto a = random_cloud(rng, 12, 2, true);
  const auto b = random_cloud(rng, 12, 2, true);
  SinkhornOptions opts;
  opts.max_iters = 3;
  opts.tol = 1e-14;
  try {
    sinkhorn(a, b, 0.05, opts);
    FAIL("expected ConvergenceError");
  } catch (const bcm::ConvergenceError& e) {
    CHECK(e.residual > 0.0);
    CHECK(e.iterations == 3);
  }
}

TEST_CASE("sinkhorn_scaling cross-checks the log-domain path and flags underflow") {
  auto rng = bcm::make_stream(26);
  const auto a = random_cloud(rng, 6, 2, false);
  const auto b = random_cloud(rng, 7, 2, false);
  const auto log_res = sinkhorn(a, b, 5.0, {});
  const auto scale_res = bcm::sinkhorn_scaling(a, b, 5.0, {});
  CHECK((log_res.plan.matrix - scale_res.plan.matrix).cwiseAbs().maxCoeff() < 1e-8);
  CHECK((log_res.potentials.f - scale_res.potentials.f).cwiseAbs().maxCoeff() < 1e-6);

  // Far-apart clouds at tiny epsilon underflow the naive kernel.
  Eigen::MatrixXd near_pt(1, 1), far_pt(1, 1);
  near_pt << 0.0;
  far_pt << 400.0;
  CHECK_THROWS_WITH_AS(
      bcm::sinkhorn_scaling(PointCloud::uniform(near_pt), PointCloud::uniform(far_pt), 1e-3, {}),
      doctest::Contains("log-domain"), bcm::ValidationError);
  // The log-domain path handles the same instance.
  const auto hard =
      sinkhorn(PointCloud::uniform(near_pt), PointCloud::uniform(far_pt), 1e-3, {});
  CHECK(hard.plan.matrix(0, 0) == doctest::Approx(1.0));
}

TEST_CASE("zero-weight points are ignored by transport") {
  Eigen::MatrixXd xs(3, 1), ys(2, 1);
  xs << 0.0, 5.0, 1.0;
  ys << 0.0, 1.0;
  Eigen::VectorXd wx(3);
  wx << 0.5, 0.0, 0.5;  // middle point carries no mass
  const PointCloud a(xs, wx);
  const auto b = PointCloud::uniform(ys);
  const auto res = sinkhorn(a, b, 0.5, {});
  CHECK(res.plan.matrix.row(1).cwiseAbs().maxCoeff() == 0.0);
  CHECK(std::isfinite(res.potentials.f(1)));
  // Reduced problem without the zero-weight point gives the same plan rows.
  Eigen::MatrixXd xr(2, 1);
  xr << 0.0, 1.0;
  const auto reduced = sinkhorn(PointCloud::uniform(xr), b, 0.5, {});
  CHECK((res.plan.matrix.row(0) - reduced.plan.matrix.row(0)).cwiseAbs().maxCoeff() < 1e-9);
  CHECK((res.plan.matrix.row(2) - reduced.plan.matrix.row(1)).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("entropic_map: convex-hull cases and formula oracle") {
  auto rng = bcm::make_stream(27);

  // Single target: everything maps onto it.
  Eigen::MatrixXd y1(1, 2);
  y1 << 3.0, -2.0;
  const auto single = PointCloud::uniform(y1);
  const auto src1 = random_cloud(rng, 4, 2, true);
  const auto res1 = sinkhorn(src1, single, 1.0, {});
  const Eigen::VectorXd probe = Eigen::VectorXd::Zero(2);
  const Eigen::VectorXd mapped = bcm::entropic_map(probe, res1.potentials, single);
  CHECK((mapped - y1.row(0).transpose()).norm() < 1e-12);

  // Two symmetric targets, query at the midpoint.
  const auto src2 = line_cloud({-1.0, 1.0});
  const auto tgt2 = line_cloud({-1.0, 1.0});
  const auto res2 = sinkhorn(src2, tgt2, 0.7, {});
  Eigen::VectorXd zero1(1);
  zero1 << 0.0;
  CHECK(std::abs(bcm::entropic_map(zero1, res2.potentials, tgt2)(0)) < 1e-12);

  // Direct re-evaluation of the softmax formula at an out-of-sample point.
  const auto src = random_cloud(rng, 6, 2, true);
  const auto tgt = random_cloud(rng, 5, 2, true);
  const double eps = 0.8;
  const auto res = sinkhorn(src, tgt, eps, {});
  Eigen::VectorXd x(2);
  x << 0.3, -0.7;
  Eigen::VectorXd num = Eigen::VectorXd::Zero(2);
  double den = 0.0;
  for (int i = 0; i < tgt.size(); ++i) {
    const double cost = 0.5 * (x - tgt.points.row(i).transpose()).squaredNorm();
    const double w = tgt.weights(i) * std::exp((res.potentials.g(i) - cost) / eps);
    num += w * tgt.points.row(i).transpose();
    den += w;
  }
  const Eigen::VectorXd direct = num / den;
  CHECK((bcm::entropic_map(x, res.potentials, tgt) - direct).norm() < 1e-10);

  // Output stays in the convex hull (1D: between min and max).
  const auto src1d = line_cloud({-2.0, 0.0, 2.0});
  const auto tgt1d = line_cloud({-1.0, 0.5, 1.5});
  const auto res1d = sinkhorn(src1d, tgt1d, 0.3, {});
  for (double q : {-5.0, -0.1, 3.0}) {
    Eigen::VectorXd qq(1);
    qq << q;
    const double t = bcm::entropic_map(qq, res1d.potentials, tgt1d)(0);
    CHECK(t >= -1.0 - 1e-12);
    CHECK(t <= 1.5 + 1e-12);
  }
}

TEST_CASE("entropic_map is invariant under common translation") {
  auto rng = bcm::make_stream(28);
  const auto a = random_cloud(rng, 7, 2, true);
  const auto b = random_cloud(rng, 6, 2, true);
  SinkhornOptions opts;
  opts.tol = 1e-10;
  const auto res = sinkhorn(a, b, 0.6, opts);
  Eigen::VectorXd t(2);
  t << 2.5, -1.25;
  const PointCloud at(a.points.rowwise() + t.transpose(), a.weights);
  const PointCloud bt(b.points.rowwise() + t.transpose(), b.weights);
  const auto res_t = sinkhorn(at, bt, 0.6, opts);
  Eigen::VectorXd x(2);
  x << 0.4, 0.9;
  const Eigen::VectorXd before = bcm::entropic_map(x, res.potentials, b);
  const Eigen::VectorXd after =
      bcm::entropic_map(Eigen::VectorXd(x + t), res_t.potentials, bt) - t;
  CHECK((before - after).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("barycentric_projection closed forms and naive-loop oracle") {
  auto rng = bcm::make_stream(29);
  const int n = 4;
  const auto cloud = random_cloud(rng, n, 2, true);

  // Diagonal coupling reproduces the targets.
  const Eigen::MatrixXd diag_plan = Eigen::MatrixXd::Identity(n, n) / n;
  const bcm::TransportPlan diag(diag_plan, cloud.weights, cloud.weights);
  CHECK((bcm::barycentric_projection(diag, cloud.weights, cloud) - cloud.points).norm() < 1e-12);

  // Independent coupling sends every row to the target mean.
  const auto tgt = random_cloud(rng, 5, 2, false);
  const Eigen::MatrixXd indep = cloud.weights * tgt.weights.transpose();
  const bcm::TransportPlan ind(indep, cloud.weights, tgt.weights);
  const Eigen::RowVectorXd mean = tgt.weights.transpose() * tgt.points;
  const Eigen::MatrixXd rows = bcm::barycentric_projection(ind, cloud.weights, tgt);
  for (int j = 0; j < n; ++j) CHECK((rows.row(j) - mean).norm() < 1e-12);

  // Naive loops on a solved plan.
  const auto res = sinkhorn(cloud, tgt, 0.8, {});
  const Eigen::MatrixXd proj = bcm::barycentric_projection(res.plan, cloud.weights, tgt);
  for (int j = 0; j < n; ++j) {
    Eigen::RowVectorXd acc = Eigen::RowVectorXd::Zero(2);
    for (int k = 0; k < tgt.size(); ++k) acc += res.plan.matrix(j, k) * tgt.points.row(k);
    CHECK((proj.row(j) - acc / cloud.weights(j)).norm() < 1e-12);
  }

  // Zero-weight row carrying mass is inconsistent.
  Eigen::VectorXd broken = cloud.weights;
  broken(0) = 0.0;
  broken(1) += cloud.weights(0);
  CHECK_THROWS_AS(bcm::barycentric_projection(res.plan, broken, tgt), bcm::ValidationError);
}

TEST_CASE("barycentric projection of matched clouds approaches identity as eps shrinks") {
  auto rng = bcm::make_stream(30);
  const auto cloud = random_cloud(rng, 8, 2, true);
  double prev = std::numeric_limits<double>::infinity();
  SinkhornOptions opts;
  opts.max_iters = 200000;
  opts.anneal_from = 2.0;
  opts.tol = 2e-7;
  for (double eps : {1.0, 0.1, 0.01}) {
    const auto res = sinkhorn(cloud, cloud, eps, opts);
    const Eigen::MatrixXd proj = bcm::barycentric_projection(res.plan, cloud.weights, cloud);
    const double dev = (proj - cloud.points).cwiseAbs().maxCoeff();
    CHECK(dev < prev + 1e-12);
    prev = dev;
  }
  CHECK(prev < 0.05);
}

TEST_CASE("entropic_cost values and bounds") {
  Eigen::MatrixXd x(1, 2), y(1, 2);
  x << 0.0, 0.0;
  y << 1.0, 2.0;
  const auto a = PointCloud::uniform(x);
  const auto b = PointCloud::uniform(y);
  const Eigen::MatrixXd m = squared_cost_matrix(a, b, false);
  const auto res = sinkhorn(a, b, 1.0, SinkhornOptions{.half_cost = false});
  CHECK(bcm::entropic_cost(res.plan, m) == doctest::Approx(m(0, 0)).epsilon(1e-12));

  // Identical clouds at small epsilon: cost stays on the eps log n scale.
  const auto line = line_cloud({0.0, 1.0, 2.0, 3.0});
  const double eps = 0.01;
  const Eigen::MatrixXd mm = squared_cost_matrix(line, line, false);
  const auto res2 = sinkhorn(line, line, eps, SinkhornOptions{.half_cost = false});
  const double cost = bcm::entropic_cost(res2.plan, mm);
  CHECK(cost >= 0.0);
  CHECK(cost < eps * std::log(4.0));

  CHECK_THROWS_AS(bcm::entropic_cost(res2.plan, m), bcm::DimensionError);
}

// The iterates start from a row-normalized Gibbs kernel, i.e. a near-greedy
// assignment, and trade cost for feasibility monotonically until both
// marginals balance: plan cost is nondecreasing in the iteration count and
// capped by the converged value.
TEST_CASE("entropic_cost is monotone along the scaling iteration and in epsilon") {
  auto rng = bcm::make_stream(31);
  const auto a = random_cloud(rng, 6, 1, true);
  const auto b = random_cloud(rng, 6, 1, true);
  const Eigen::MatrixXd m = squared_cost_matrix(a, b, false);

  SinkhornOptions tight;
  tight.half_cost = false;
  tight.tol = 1e-12;
  tight.max_iters = 200000;
  const auto solved = sinkhorn(a, b, 0.5, tight);
  const double converged_cost = bcm::entropic_cost(solved.plan, m);

  ScalingOracle oracle(a, b, 0.5, false);
  double prev = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < 8; ++k) {
    oracle.iterate(2);
    const double cost = (oracle.plan().array() * m.array()).sum();
    CHECK(cost >= prev - 1e-10);
    CHECK(cost <= converged_cost + 1e-10);
    prev = cost;
  }

  // Monotone toward the sorted-matching cost as epsilon shrinks.
  std::vector<double> sa(a.points.data(), a.points.data() + 6);
  std::vector<double> sb(b.points.data(), b.points.data() + 6);
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  double sorted_cost = 0.0;
  for (int i = 0; i < 6; ++i) sorted_cost += (sa[i] - sb[i]) * (sa[i] - sb[i]) / 6.0;
  double prev_cost = std::numeric_limits<double>::infinity();
  SinkhornOptions sweep;
  sweep.half_cost = false;
  sweep.max_iters = 400000;
  sweep.anneal_from = 1.0;
  for (double eps : {1.0, 0.1, 0.01}) {
    const auto res = sinkhorn(a, b, eps, sweep);
    const double cost = bcm::entropic_cost(res.plan, m);
    CHECK(cost <= prev_cost + 1e-10);
    CHECK(cost >= sorted_cost - 1e-9);
    prev_cost = cost;
  }
  CHECK(prev_cost == doctest::Approx(sorted_cost).epsilon(0.01));
}
