#include "bcm/synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <utility>
#include <vector>

#include "bcm/error.hpp"

namespace bcm {

Sorted1DSample::Sorted1DSample(Eigen::VectorXd v) : values(std::move(v)) {
  if (values.size() == 0) throw ValidationError("Sorted1DSample: empty sample");
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values(i))) throw ValidationError("Sorted1DSample: non-finite value");
  }
  std::stable_sort(values.data(), values.data() + values.size());
}

Eigen::VectorXd monotone_map_1d(const Sorted1DSample& src, const Sorted1DSample& dst) {
  if (src.size() != dst.size()) {
    throw DimensionError("monotone_map_1d: sample counts differ, " + std::to_string(src.size()) +
                         " vs " + std::to_string(dst.size()));
  }
  return dst.values;
}

Sorted1DSample quantile_barycenter_1d(const Coordinates& lambda,
                                      const std::vector<Sorted1DSample>& refs) {
  if (refs.empty()) throw ValidationError("quantile_barycenter_1d: no references");
  if (lambda.size() != static_cast<int>(refs.size())) {
    throw DimensionError("quantile_barycenter_1d: coordinate/reference count mismatch");
  }
  const int n = refs.front().size();
  for (const auto& r : refs) {
    if (r.size() != n) throw DimensionError("quantile_barycenter_1d: sample counts differ");
  }
  Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < lambda.size(); ++i) out += lambda(i) * refs[i].values;
  return Sorted1DSample(std::move(out));
}

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// out(k) = LSE_j((v_j - C_jk)/eps); C symmetric, so this serves both
// directions of the kernel application.
void lse_kernel_apply(const Eigen::MatrixXd& cost, const Eigen::VectorXd& v, double eps,
                      Eigen::VectorXd& out) {
  const Eigen::Index n = cost.cols();
  Eigen::ArrayXd z(cost.rows());
  for (Eigen::Index k = 0; k < n; ++k) {
    z = (v - cost.col(k)).array() / eps;
    const double zmax = z.maxCoeff();
    if (zmax == kNegInf) {
      out(k) = kNegInf;
      continue;
    }
    out(k) = zmax + std::log((z - zmax).exp().sum());
  }
}

}  // namespace

GridMeasure ibp_barycenter(const Coordinates& lambda, const std::vector<GridMeasure>& refs,
                           double epsilon, const IbpOptions& opts) {
  if (refs.empty()) throw ValidationError("ibp_barycenter: no references");
  if (lambda.size() != static_cast<int>(refs.size())) {
    throw DimensionError("ibp_barycenter: coordinate/reference count mismatch");
  }
  if (!(epsilon > 0.0)) throw ValidationError("ibp_barycenter: epsilon must be positive");
  const int h = refs.front().height();
  const int w = refs.front().width();
  for (const auto& r : refs) {
    if (r.height() != h || r.width() != w) {
      throw DimensionError("ibp_barycenter: references on different grids");
    }
  }
  const int n = h * w;

  // Squared pixel distances at unit spacing, dense n x n.
  Eigen::MatrixXd cost(n, n);
  for (int a = 0; a < n; ++a) {
    const int ra = a / w, ca = a % w;
    for (int b = 0; b < n; ++b) {
      const int rb = b / w, cb = b % w;
      cost(a, b) = static_cast<double>((ra - rb) * (ra - rb) + (ca - cb) * (ca - cb));
    }
  }

  // Active references: zero-coordinate entries do not influence the barycenter.
  std::vector<int> used;
  for (int i = 0; i < lambda.size(); ++i) {
    if (lambda(i) > 0.0) used.push_back(i);
  }
  const int m = static_cast<int>(used.size());

  std::vector<Eigen::VectorXd> log_q(m, Eigen::VectorXd(n));
  for (int t = 0; t < m; ++t) {
    const auto& mass = refs[used[t]].mass;
    for (int i = 0; i < h; ++i)
      for (int j = 0; j < w; ++j)
        log_q[t](i * w + j) = mass(i, j) > 0.0 ? std::log(mass(i, j)) : kNegInf;
  }

  std::vector<Eigen::VectorXd> phi(m, Eigen::VectorXd::Zero(n));
  std::vector<Eigen::VectorXd> psi(m, Eigen::VectorXd(n));
  std::vector<Eigen::VectorXd> log_kv(m, Eigen::VectorXd(n));
  Eigen::VectorXd scratch(n);
  Eigen::VectorXd log_b(n);
  Eigen::VectorXd b_prev = Eigen::VectorXd::Constant(n, 1.0 / n);
  double last_drift = std::numeric_limits<double>::infinity();

  for (int it = 1; it <= opts.max_iters; ++it) {
    for (int t = 0; t < m; ++t) {
      lse_kernel_apply(cost, phi[t], epsilon, scratch);
      psi[t] = epsilon * log_q[t] - epsilon * scratch;
      lse_kernel_apply(cost, psi[t], epsilon, scratch);
      log_kv[t] = scratch;
    }
    log_b.setZero();
    for (int t = 0; t < m; ++t) log_b += lambda(used[t]) * log_kv[t];
    for (int t = 0; t < m; ++t) phi[t] = epsilon * (log_b - log_kv[t]);

    Eigen::VectorXd b = log_b.array().exp();
    const double drift = (b - b_prev).cwiseAbs().sum();
    b_prev = b;
    last_drift = drift;
    if (drift < opts.tol) {
      Eigen::MatrixXd out(h, w);
      for (int i = 0; i < h; ++i)
        for (int j = 0; j < w; ++j) out(i, j) = b(i * w + j);
      out /= out.sum();
      return GridMeasure(std::move(out));
    }
  }
  std::ostringstream msg;
  msg << "ibp_barycenter: no convergence after " << opts.max_iters << " iterations, drift "
      << last_drift;
  throw ConvergenceError(msg.str(), last_drift, opts.max_iters);
}

}  // namespace bcm
