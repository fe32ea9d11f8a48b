#include "bcm/entropic.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

#include "bcm/error.hpp"

namespace bcm {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

Eigen::VectorXd log_weights(const Eigen::VectorXd& w) {
  Eigen::VectorXd lw(w.size());
  for (Eigen::Index i = 0; i < w.size(); ++i) lw(i) = w(i) > 0.0 ? std::log(w(i)) : kNegInf;
  return lw;
}

// Column-wise log-sum-exp of (u_j - M_jk)/eps over j, returned scaled by -eps.
// This is one half-update of the log-domain iteration: given row potentials
// folded into u = f + eps*log(a), it produces the fresh column potential.
Eigen::VectorXd half_update_cols(const Eigen::MatrixXd& m, const Eigen::VectorXd& u, double eps) {
  const Eigen::Index cols = m.cols();
  Eigen::VectorXd out(cols);
  Eigen::ArrayXd z(m.rows());
  for (Eigen::Index k = 0; k < cols; ++k) {
    z = (u - m.col(k)).array() / eps;
    const double zmax = z.maxCoeff();
    out(k) = -eps * (zmax + std::log((z - zmax).exp().sum()));
  }
  return out;
}

// Row half-update, expressed on the transposed cost so both passes stream
// down contiguous columns.
Eigen::VectorXd half_update_rows(const Eigen::MatrixXd& m_t, const Eigen::VectorXd& v,
                                 double eps) {
  return half_update_cols(m_t, v, eps);
}

Eigen::MatrixXd plan_from_potentials(const Eigen::MatrixXd& m, const Eigen::VectorXd& f,
                                     const Eigen::VectorXd& g, const Eigen::VectorXd& loga,
                                     const Eigen::VectorXd& logb, double eps) {
  Eigen::MatrixXd logp = -m;
  logp.colwise() += f;
  logp.rowwise() += g.transpose();
  logp /= eps;
  logp.colwise() += loga;
  logp.rowwise() += logb.transpose();
  Eigen::MatrixXd plan = logp.array().exp().matrix();
  // Vectorized exp clamps -inf to a subnormal; zero-weight atoms must carry
  // exactly no plan mass.
  for (Eigen::Index j = 0; j < plan.rows(); ++j) {
    if (loga(j) == kNegInf) plan.row(j).setZero();
  }
  for (Eigen::Index k = 0; k < plan.cols(); ++k) {
    if (logb(k) == kNegInf) plan.col(k).setZero();
  }
  return plan;
}

struct LogSinkhornState {
  Eigen::VectorXd f, g;
  int iterations = 0;
  double residual = std::numeric_limits<double>::infinity();
};

// Alternating exact half-updates at a fixed epsilon. On return the rows of the
// induced plan are exactly feasible and the column l1 residual is < tol (or
// the iteration budget ran out, flagged by residual).
void run_log_sinkhorn(const Eigen::MatrixXd& m, const Eigen::MatrixXd& m_t,
                      const Eigen::VectorXd& b, const Eigen::VectorXd& loga,
                      const Eigen::VectorXd& logb, double eps, double tol, int max_iters,
                      LogSinkhornState& st) {
  const Eigen::VectorXd eloga = eps * loga;
  const Eigen::VectorXd elogb = eps * logb;
  st.f = half_update_rows(m_t, st.g + elogb, eps);
  st.iterations += 1;
  while (st.iterations < max_iters) {
    // The fresh column potential doubles as the column-marginal residual of
    // the current pair: colsum_k = b_k exp((g_k - g_next_k)/eps).
    const Eigen::VectorXd g_next = half_update_cols(m, st.f + eloga, eps);
    double res = 0.0;
    for (Eigen::Index k = 0; k < b.size(); ++k) {
      if (b(k) > 0.0) res += b(k) * std::abs(std::exp((st.g(k) - g_next(k)) / eps) - 1.0);
    }
    st.residual = res;
    if (res < tol) return;
    st.g = g_next;
    st.f = half_update_rows(m_t, st.g + elogb, eps);
    st.iterations += 1;
  }
}

SinkhornResult finish(const Eigen::MatrixXd& m, const PointCloud& a, const PointCloud& b,
                      double eps, bool half_cost, const LogSinkhornState& st) {
  // Resolve the dual shift (f + c, g - c): split the constant equally so the
  // weighted means of the two potentials coincide.
  const double shift = 0.5 * (a.weights.dot(st.f) - b.weights.dot(st.g));
  Eigen::VectorXd f = st.f.array() - shift;
  Eigen::VectorXd g = st.g.array() + shift;
  Eigen::MatrixXd plan =
      plan_from_potentials(m, f, g, log_weights(a.weights), log_weights(b.weights), eps);
  SinkhornResult result{DualPotentials{std::move(f), std::move(g), eps, half_cost},
                        TransportPlan(std::move(plan), a.weights, b.weights), st.iterations,
                        st.residual};
  return result;
}

}  // namespace

Eigen::MatrixXd squared_cost_matrix(const PointCloud& a, const PointCloud& b, bool half) {
  if (a.dim() != b.dim()) {
    throw DimensionError("squared_cost_matrix: ambient dimensions differ, " +
                         std::to_string(a.dim()) + " vs " + std::to_string(b.dim()));
  }
  const Eigen::VectorXd na = a.points.rowwise().squaredNorm();
  const Eigen::VectorXd nb = b.points.rowwise().squaredNorm();
  Eigen::MatrixXd m = -2.0 * a.points * b.points.transpose();
  m.colwise() += na;
  m.rowwise() += nb.transpose();
  m = m.cwiseMax(0.0);
  if (half) m *= 0.5;
  return m;
}

TransportPlan::TransportPlan(Eigen::MatrixXd m, Eigen::VectorXd source, Eigen::VectorXd target)
    : matrix(std::move(m)), source_weights(std::move(source)), target_weights(std::move(target)) {
  if (matrix.rows() != source_weights.size() || matrix.cols() != target_weights.size()) {
    throw DimensionError("TransportPlan: plan shape does not match marginals");
  }
  if (matrix.minCoeff() < 0.0) throw ValidationError("TransportPlan: negative entry");
  const double row_res = (matrix.rowwise().sum() - source_weights).cwiseAbs().sum();
  const double col_res = (matrix.colwise().sum().transpose() - target_weights).cwiseAbs().sum();
  if (row_res > 1e-6 || col_res > 1e-6) {
    std::ostringstream msg;
    msg << "TransportPlan: marginal l1 residuals " << row_res << ", " << col_res
        << " exceed 1e-6";
    throw ValidationError(msg.str());
  }
  // Entropic solves return plans that are strictly positive on the support of
  // the marginals; arbitrary feasible plans (diagonal couplings, products of
  // marginals) are also representable, so density is not enforced here.
}

SinkhornResult sinkhorn(const PointCloud& a, const PointCloud& b, double epsilon,
                        const SinkhornOptions& opts) {
  if (!(epsilon > 0.0)) throw ValidationError("sinkhorn: epsilon must be positive");
  const Eigen::MatrixXd m = squared_cost_matrix(a, b, opts.half_cost);
  const Eigen::MatrixXd m_t = m.transpose();
  const Eigen::VectorXd loga = log_weights(a.weights);
  const Eigen::VectorXd logb = log_weights(b.weights);

  LogSinkhornState st;
  st.f = Eigen::VectorXd::Zero(a.size());
  st.g = Eigen::VectorXd::Zero(b.size());

  if (opts.anneal_from > epsilon) {
    const double stage_tol = std::max(opts.tol, 1e-3);
    double eps_stage = opts.anneal_from;
    while (eps_stage > epsilon && st.iterations < opts.max_iters) {
      run_log_sinkhorn(m, m_t, b.weights, loga, logb, eps_stage, stage_tol, opts.max_iters, st);
      eps_stage = std::max(0.5 * eps_stage, epsilon);
    }
  }
  run_log_sinkhorn(m, m_t, b.weights, loga, logb, epsilon, opts.tol, opts.max_iters, st);
  if (st.residual >= opts.tol) {
    std::ostringstream msg;
    msg << "sinkhorn: no convergence after " << st.iterations
        << " iterations, marginal l1 residual " << st.residual;
    throw ConvergenceError(msg.str(), st.residual, st.iterations);
  }
  return finish(m, a, b, epsilon, opts.half_cost, st);
}

SinkhornResult sinkhorn_scaling(const PointCloud& a, const PointCloud& b, double epsilon,
                                const SinkhornOptions& opts) {
  if (!(epsilon > 0.0)) throw ValidationError("sinkhorn_scaling: epsilon must be positive");
  if (a.weights.minCoeff() <= 0.0 || b.weights.minCoeff() <= 0.0) {
    throw ValidationError("sinkhorn_scaling: weights must be strictly positive");
  }
  const Eigen::MatrixXd m = squared_cost_matrix(a, b, opts.half_cost);
  const Eigen::MatrixXd kernel = (-m / epsilon).array().exp().matrix();
  if (kernel.rowwise().sum().minCoeff() <= 0.0 || kernel.colwise().sum().minCoeff() <= 0.0) {
    throw ValidationError(
        "sinkhorn_scaling: kernel underflow at this epsilon; use the log-domain sinkhorn() "
        "path");
  }
  Eigen::VectorXd u = Eigen::VectorXd::Ones(a.size());
  Eigen::VectorXd v = Eigen::VectorXd::Ones(b.size());
  double residual = std::numeric_limits<double>::infinity();
  int it = 0;
  for (; it < opts.max_iters; ++it) {
    u = a.weights.cwiseQuotient(kernel * v);
    v = b.weights.cwiseQuotient(kernel.transpose() * u);
    const Eigen::MatrixXd plan = u.asDiagonal() * kernel * v.asDiagonal();
    const double row_res = (plan.rowwise().sum() - a.weights).cwiseAbs().sum();
    const double col_res = (plan.colwise().sum().transpose() - b.weights).cwiseAbs().sum();
    residual = std::max(row_res, col_res);
    if (residual < opts.tol) break;
  }
  if (residual >= opts.tol) {
    throw ConvergenceError("sinkhorn_scaling: no convergence after " + std::to_string(it) +
                               " iterations",
                           residual, it);
  }
  LogSinkhornState st;
  st.f = epsilon * (u.array().log() - a.weights.array().log()).matrix();
  st.g = epsilon * (v.array().log() - b.weights.array().log()).matrix();
  st.iterations = it + 1;
  st.residual = residual;
  return finish(m, a, b, epsilon, opts.half_cost, st);
}

Eigen::VectorXd entropic_map(const Eigen::VectorXd& x, const DualPotentials& potentials,
                             const PointCloud& targets) {
  if (x.size() != targets.dim()) {
    throw DimensionError("entropic_map: point dimension " + std::to_string(x.size()) +
                         " does not match targets of dimension " + std::to_string(targets.dim()));
  }
  if (potentials.g.size() != targets.size()) {
    throw DimensionError("entropic_map: potentials were computed against a different support");
  }
  const double eps = potentials.epsilon;
  const double cost_scale = potentials.half_cost ? 0.5 : 1.0;
  Eigen::ArrayXd z(targets.size());
  for (int k = 0; k < targets.size(); ++k) {
    const double c = cost_scale * (targets.points.row(k).transpose() - x).squaredNorm();
    const double lw = targets.weights(k) > 0.0 ? std::log(targets.weights(k)) : kNegInf;
    z(k) = lw + (potentials.g(k) - c) / eps;
  }
  const double zmax = z.maxCoeff();
  const Eigen::ArrayXd w = (z - zmax).exp();
  return (targets.points.transpose() * w.matrix()) / w.sum();
}

Eigen::MatrixXd entropic_map(const Eigen::MatrixXd& xs, const DualPotentials& potentials,
                             const PointCloud& targets) {
  Eigen::MatrixXd out(xs.rows(), targets.dim());
  for (Eigen::Index i = 0; i < xs.rows(); ++i) {
    out.row(i) = entropic_map(Eigen::VectorXd(xs.row(i)), potentials, targets).transpose();
  }
  return out;
}

Eigen::MatrixXd barycentric_projection(const TransportPlan& plan,
                                       const Eigen::VectorXd& source_weights,
                                       const PointCloud& targets) {
  if (plan.matrix.cols() != targets.size()) {
    throw DimensionError("barycentric_projection: plan has " +
                         std::to_string(plan.matrix.cols()) + " columns but " +
                         std::to_string(targets.size()) + " targets");
  }
  if (source_weights.size() != plan.matrix.rows()) {
    throw DimensionError("barycentric_projection: source weight length mismatch");
  }
  if ((plan.source_weights - source_weights).cwiseAbs().sum() > 1e-8) {
    throw ValidationError("barycentric_projection: plan marginals do not match source weights");
  }
  Eigen::MatrixXd out(plan.matrix.rows(), targets.dim());
  for (Eigen::Index j = 0; j < plan.matrix.rows(); ++j) {
    const double w = source_weights(j);
    const double row_mass = plan.matrix.row(j).sum();
    if (w <= 0.0) {
      if (row_mass > 1e-12) {
        throw ValidationError("barycentric_projection: zero source weight on row " +
                              std::to_string(j) + " carrying plan mass " +
                              std::to_string(row_mass));
      }
      out.row(j).setZero();
      continue;
    }
    out.row(j) = (plan.matrix.row(j) * targets.points) / w;
  }
  return out;
}

double entropic_cost(const TransportPlan& plan, const Eigen::MatrixXd& cost) {
  if (plan.matrix.rows() != cost.rows() || plan.matrix.cols() != cost.cols()) {
    throw DimensionError("entropic_cost: plan and cost shapes differ");
  }
  return (plan.matrix.array() * cost.array()).sum();
}

double potential_identity_residual(const DualPotentials& potentials, const PointCloud& a,
                                   const PointCloud& b) {
  const Eigen::MatrixXd m = squared_cost_matrix(a, b, potentials.half_cost);
  const double eps = potentials.epsilon;
  double worst = 0.0;
  for (int j = 0; j < a.size(); ++j) {
    double s = 0.0;
    for (int k = 0; k < b.size(); ++k) {
      if (b.weights(k) > 0.0)
        s += b.weights(k) * std::exp((potentials.f(j) + potentials.g(k) - m(j, k)) / eps);
    }
    worst = std::max(worst, std::abs(s - 1.0));
  }
  for (int k = 0; k < b.size(); ++k) {
    double s = 0.0;
    for (int j = 0; j < a.size(); ++j) {
      if (a.weights(j) > 0.0)
        s += a.weights(j) * std::exp((potentials.f(j) + potentials.g(k) - m(j, k)) / eps);
    }
    worst = std::max(worst, std::abs(s - 1.0));
  }
  return worst;
}

}  // namespace bcm
