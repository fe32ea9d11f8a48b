#include "bcm/qp.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>
#include <cmath>
#include <sstream>
#include <vector>

namespace bcm {

namespace {

double objective(const Eigen::MatrixXd& a, const Eigen::VectorXd& c, const Eigen::VectorXd& x) {
  return x.dot(a * x) + c.dot(x);
}

// Frank-Wolfe gap at x: <grad, x> - min_i grad_i. Zero exactly at simplex-QP
// optimality, and an upper bound on the objective suboptimality.
double fw_gap(const Eigen::VectorXd& grad, const Eigen::VectorXd& x) {
  return grad.dot(x) - grad.minCoeff();
}

struct PgResult {
  Eigen::VectorXd x;
  double gap;
  int iterations;
  bool converged;
};

// Projected gradient with Nesterov momentum and restart on objective
// increase. Fixed step 1/(2 lambda_max(A)); for a vanishing quadratic part the
// step falls back to the linear-term scale so pure linear programs still move.
PgResult accelerated_projected_gradient(const Eigen::MatrixXd& a, const Eigen::VectorXd& c,
                                        const Eigen::VectorXd& init, double gap_tol,
                                        int max_iters) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(a, Eigen::EigenvaluesOnly);
  const double lam_max = std::max(eig.eigenvalues().maxCoeff(), 0.0);
  const double c_scale = c.size() > 0 ? c.cwiseAbs().maxCoeff() : 0.0;
  const double step_denominator = std::max(2.0 * lam_max, c_scale);

  Eigen::VectorXd x = init;
  Eigen::VectorXd grad = 2.0 * (a * x) + c;
  double gap = fw_gap(grad, x);
  if (gap <= gap_tol || step_denominator <= 0.0) {
    return PgResult{x, gap, 0, true};
  }
  const double step = 1.0 / step_denominator;

  Eigen::VectorXd y = x;
  double t = 1.0;
  double fx = objective(a, c, x);
  Eigen::VectorXd best_x = x;
  double best_f = fx;

  for (int it = 1; it <= max_iters; ++it) {
    const Eigen::VectorXd grad_y = 2.0 * (a * y) + c;
    Eigen::VectorXd x_next = project_simplex(y - step * grad_y).lambda;
    double f_next = objective(a, c, x_next);
    if (f_next > fx) {
      // Momentum overshot; restart from the plain gradient step.
      x_next = project_simplex(x - step * (2.0 * (a * x) + c)).lambda;
      f_next = objective(a, c, x_next);
      y = x_next;
      t = 1.0;
    } else {
      const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
      y = x_next + ((t - 1.0) / t_next) * (x_next - x);
      t = t_next;
    }
    x = x_next;
    fx = f_next;
    if (fx < best_f) {
      best_f = fx;
      best_x = x;
    }
    grad = 2.0 * (a * x) + c;
    gap = fw_gap(grad, x);
    if (gap <= gap_tol) return PgResult{x, gap, it, true};
  }
  grad = 2.0 * (a * best_x) + c;
  return PgResult{best_x, fw_gap(grad, best_x), max_iters, false};
}

}  // namespace

QpSolution solve_simplex_qp(const GramMatrix& a, const std::optional<Eigen::VectorXd>& c,
                            const QpOptions& opts) {
  const int p = a.size();
  const Eigen::VectorXd lin = c.value_or(Eigen::VectorXd::Zero(p));
  if (lin.size() != p) {
    throw DimensionError("solve_simplex_qp: linear term length " + std::to_string(lin.size()) +
                         " for a " + std::to_string(p) + "-dimensional problem");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(a.matrix(), Eigen::EigenvaluesOnly);
  const double scale =
      std::max({eig.eigenvalues().maxCoeff(), lin.size() > 0 ? lin.cwiseAbs().maxCoeff() : 0.0,
                0.0});
  const double gap_tol = opts.tol * scale;

  const PgResult pg = accelerated_projected_gradient(a.matrix(), lin,
                                                     Coordinates::uniform(p).lambda, gap_tol,
                                                     opts.max_iters);
  QpSolution solution{Coordinates(pg.x), objective(a.matrix(), lin, pg.x), pg.iterations,
                      pg.converged};
  if (!pg.converged) {
    std::ostringstream msg;
    msg << "solve_simplex_qp: first-order gap " << pg.gap << " above tolerance " << gap_tol
        << " after " << pg.iterations << " iterations";
    throw QpConvergenceError(msg.str(), pg.gap, pg.iterations, std::move(solution));
  }
  return solution;
}

namespace {

// Projection onto the affine slice {x = V y : 1^T x = 1} of the null space.
// Returns false when the slice is empty (null space orthogonal to 1).
bool project_null_affine(const Eigen::MatrixXd& v0, const Eigen::VectorXd& z, double z_norm_sq,
                         const Eigen::VectorXd& x, Eigen::VectorXd& out) {
  if (z_norm_sq <= 1e-24) return false;
  Eigen::VectorXd y = v0.transpose() * x;
  y += z * ((1.0 - z.dot(y)) / z_norm_sq);
  out = v0 * y;
  return true;
}

// Minimum-norm point of {simplex} ∩ {affine null slice} by Dykstra's
// alternating projections from the origin. Returns false if the intersection
// is (numerically) empty.
bool min_norm_feasible_point(const Eigen::MatrixXd& v0, const Eigen::VectorXd& z,
                             Eigen::VectorXd& out) {
  const int p = static_cast<int>(v0.rows());
  const double z_norm_sq = z.squaredNorm();
  Eigen::VectorXd x = Eigen::VectorXd::Zero(p);
  Eigen::VectorXd inc_affine = Eigen::VectorXd::Zero(p);
  Eigen::VectorXd inc_simplex = Eigen::VectorXd::Zero(p);
  Eigen::VectorXd affine_pt(p);
  for (int it = 0; it < 20000; ++it) {
    if (!project_null_affine(v0, z, z_norm_sq, x + inc_affine, affine_pt)) return false;
    inc_affine = (x + inc_affine) - affine_pt;
    const Eigen::VectorXd simplex_pt = project_simplex(affine_pt + inc_simplex).lambda;
    inc_simplex = (affine_pt + inc_simplex) - simplex_pt;
    const double drift = (simplex_pt - x).cwiseAbs().maxCoeff();
    x = simplex_pt;
    if (drift < 1e-14 && it > 2) break;
  }
  // Feasibility: x is on the simplex by construction; check the affine side.
  Eigen::VectorXd affine_proj(p);
  if (!project_null_affine(v0, z, z_norm_sq, x, affine_proj)) return false;
  if ((x - affine_proj).norm() > 1e-7) return false;
  out = x;
  return true;
}

}  // namespace

MultiplicityDiagnosis minimizer_multiplicity(const GramMatrix& a, double tol) {
  const int p = a.size();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(a.matrix());
  const Eigen::VectorXd w = eig.eigenvalues();  // ascending
  const double lam_max = std::max(w.maxCoeff(), 0.0);
  const double threshold = tol * lam_max;
  int k = 0;
  while (k < p && w(k) <= threshold) ++k;

  MultiplicityDiagnosis diag{MultiplicityKind::NoExactSolution, std::nullopt,
                             Eigen::MatrixXd(p, 0), k};
  if (k == 0) return diag;

  const Eigen::MatrixXd v0 = eig.eigenvectors().leftCols(k);
  const Eigen::VectorXd z = v0.transpose() * Eigen::VectorXd::Ones(p);

  if (k == 1) {
    // One null direction: the affine slice is a single point if it exists.
    if (std::abs(z(0)) < 1e-12) return diag;
    Eigen::VectorXd x = v0.col(0) / z(0);
    if (x.minCoeff() < -1e-10) return diag;
    diag.kind = MultiplicityKind::Unique;
    diag.witness = Coordinates(x.cwiseMax(0.0) / x.cwiseMax(0.0).sum());
    return diag;
  }

  Eigen::VectorXd witness;
  if (!min_norm_feasible_point(v0, z, witness)) return diag;

  // Directions of the solution face: null-space vectors with zero coordinate sum.
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(z);
  const Eigen::MatrixXd q = qr.householderQ();
  const Eigen::MatrixXd u = v0 * q.rightCols(k - 1);  // p x (k-1), orthonormal columns

  std::vector<int> active;
  for (int i = 0; i < p; ++i) {
    if (witness(i) <= 1e-9) active.push_back(i);
  }

  bool infinitely_many = false;
  Eigen::MatrixXd face = u;
  if (active.empty()) {
    // Interior witness: every null direction stays feasible for a short step.
    infinitely_many = true;
  } else {
    // Directions vanishing on the active set are always feasible.
    Eigen::MatrixXd restricted(static_cast<int>(active.size()), u.cols());
    for (size_t r = 0; r < active.size(); ++r) restricted.row(static_cast<int>(r)) = u.row(active[r]);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(restricted, Eigen::ComputeFullV);
    const double sv_max = svd.singularValues().size() > 0 ? svd.singularValues().maxCoeff() : 0.0;
    int rank = 0;
    for (Eigen::Index s = 0; s < svd.singularValues().size(); ++s) {
      if (svd.singularValues()(s) > 1e-10 * std::max(sv_max, 1.0)) ++rank;
    }
    if (rank < u.cols()) {
      infinitely_many = true;
      face = u * svd.matrixV().rightCols(u.cols() - rank);
    } else if (u.cols() == 1) {
      // Single direction: feasible iff it is signed away from the active set.
      Eigen::VectorXd dir = u.col(0);
      double min_active = 0.0, max_active = 0.0;
      for (int idx : active) {
        min_active = std::min(min_active, dir(idx));
        max_active = std::max(max_active, dir(idx));
      }
      if (min_active >= -1e-12 || max_active <= 1e-12) infinitely_many = true;
    } else {
      // Several directions and a full-rank active block: probe the face by
      // re-running the feasibility solve from each vertex and comparing the
      // zero-objective minimizers reached.
      const Eigen::MatrixXd q_feas =
          Eigen::MatrixXd::Identity(p, p) - v0 * v0.transpose();
      for (int j = 0; j < p && !infinitely_many; ++j) {
        Eigen::VectorXd e = Eigen::VectorXd::Zero(p);
        e(j) = 1.0;
        const PgResult probe =
            accelerated_projected_gradient(q_feas, Eigen::VectorXd::Zero(p), e, 0.0, 20000);
        if (probe.x.dot(q_feas * probe.x) > 1e-14) continue;
        if ((probe.x - witness).cwiseAbs().maxCoeff() > 1e-6) infinitely_many = true;
      }
    }
  }

  diag.witness = Coordinates(witness.cwiseMax(0.0) / witness.cwiseMax(0.0).sum());
  if (infinitely_many) {
    diag.kind = MultiplicityKind::InfinitelyMany;
    diag.face_directions = face;
  } else {
    diag.kind = MultiplicityKind::Unique;
  }
  return diag;
}

}  // namespace bcm
