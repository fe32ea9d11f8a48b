#include "bcm/gaussian.hpp"

#include <Eigen/Eigenvalues>
#include <sstream>

#include "bcm/error.hpp"

namespace bcm {

namespace {

Eigen::MatrixXd symmetrize(const Eigen::MatrixXd& m) { return 0.5 * (m + m.transpose()); }

Eigen::MatrixXd spd_sqrt_raw(const Eigen::MatrixXd& s) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(s);
  return symmetrize(eig.eigenvectors() * eig.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal() *
                    eig.eigenvectors().transpose());
}

}  // namespace

Eigen::MatrixXd transport_matrix(const SpdMatrix& s0, const SpdMatrix& si) {
  if (s0.dim() != si.dim()) {
    throw DimensionError("transport_matrix: dimension mismatch " + std::to_string(s0.dim()) +
                         " vs " + std::to_string(si.dim()));
  }
  const Eigen::MatrixXd root = sqrt_spd(s0).matrix();
  const Eigen::MatrixXd root_inv = inv_sqrt_spd(s0).matrix();
  const Eigen::MatrixXd middle = spd_sqrt_raw(symmetrize(root * si.matrix() * root));
  return symmetrize(root_inv * middle * root_inv);
}

BarycenterResult gaussian_barycenter(const Coordinates& lambda, const std::vector<SpdMatrix>& refs,
                                     double tol, int max_iters) {
  if (refs.empty()) throw ValidationError("gaussian_barycenter: no reference measures");
  if (lambda.size() != static_cast<int>(refs.size())) {
    throw DimensionError("gaussian_barycenter: " + std::to_string(lambda.size()) +
                         " coordinates for " + std::to_string(refs.size()) + " references");
  }
  const int d = refs.front().dim();
  for (const auto& r : refs) {
    if (r.dim() != d) throw DimensionError("gaussian_barycenter: references of mixed dimension");
  }

  // Linear mixture start: SPD and cheap.
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(d, d);
  for (int i = 0; i < lambda.size(); ++i) s += lambda(i) * refs[i].matrix();

  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(d, d);
  for (int it = 1; it <= max_iters; ++it) {
    const SpdMatrix cur(s);
    const Eigen::MatrixXd root = sqrt_spd(cur).matrix();
    const Eigen::MatrixXd root_inv = inv_sqrt_spd(cur).matrix();
    Eigen::MatrixXd mixed = Eigen::MatrixXd::Zero(d, d);
    for (int i = 0; i < lambda.size(); ++i) {
      if (lambda(i) == 0.0) continue;
      mixed += lambda(i) * spd_sqrt_raw(symmetrize(root * refs[i].matrix() * root));
    }
    // sum_i lambda_i C_i = S^{-1/2} mixed S^{-1/2}; its distance to I is the
    // first-order condition residual.
    const double residual = (symmetrize(root_inv * mixed * root_inv) - eye).norm();
    if (residual < tol) return BarycenterResult{cur, it, residual};
    if (it == max_iters) {
      std::ostringstream msg;
      msg << "gaussian_barycenter: no convergence after " << max_iters
          << " iterations, residual " << residual;
      throw ConvergenceError(msg.str(), residual, max_iters);
    }
    s = symmetrize(root_inv * mixed * mixed * root_inv);
  }
  throw ConvergenceError("gaussian_barycenter: empty iteration budget", 0.0, 0);
}

}  // namespace bcm
