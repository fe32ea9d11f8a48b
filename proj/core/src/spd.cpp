#include "bcm/spd.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <sstream>

#include "bcm/error.hpp"

namespace bcm {

namespace {

constexpr double kSymmetryRelTol = 1e-12;
constexpr double kEigenvalueRelTol = 1e-12;

Eigen::MatrixXd symmetrize(const Eigen::MatrixXd& m) { return 0.5 * (m + m.transpose()); }

}  // namespace

SpdMatrix::SpdMatrix(Eigen::MatrixXd m) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw DimensionError("SpdMatrix: expected a nonempty square matrix, got " +
                         std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
  const double norm = m.norm();
  const double asym = (m - m.transpose()).norm();
  if (asym > kSymmetryRelTol * std::max(norm, 1e-300)) {
    std::ostringstream msg;
    msg << "SpdMatrix: matrix is not symmetric, relative asymmetry " << asym / norm;
    throw ValidationError(msg.str());
  }
  m_ = symmetrize(m);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m_, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  if (!(lo > 0.0) || lo < kEigenvalueRelTol * hi) {
    std::ostringstream msg;
    msg << "SpdMatrix: not strictly positive definite, smallest eigenvalue " << lo;
    throw NotSpdError(msg.str(), lo);
  }
}

SpdMatrix SpdMatrix::identity(int dim) { return SpdMatrix(Eigen::MatrixXd::Identity(dim, dim)); }

SpdMatrix sqrt_spd(const SpdMatrix& s) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(s.matrix());
  const Eigen::VectorXd roots = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return SpdMatrix(
      symmetrize(eig.eigenvectors() * roots.asDiagonal() * eig.eigenvectors().transpose()));
}

SpdMatrix sqrt_spd_newton_schulz(const SpdMatrix& s, int max_iters) {
  const int d = s.dim();
  const Eigen::MatrixXd& a = s.matrix();
  // Scale so the spectrum lies in (0, 1]; required for convergence.
  const double scale = a.norm();
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(d, d);
  Eigen::MatrixXd y = a / scale;
  Eigen::MatrixXd z = eye;
  for (int it = 0; it < max_iters; ++it) {
    const Eigen::MatrixXd t = 0.5 * (3.0 * eye - z * y);
    y = y * t;
    z = t * z;
    const double residual = (y * y - a / scale).norm();
    if (residual < 1e-14 * std::max(1.0, (a / scale).norm())) break;
  }
  return SpdMatrix(symmetrize(std::sqrt(scale) * y));
}

SpdMatrix inv_sqrt_spd(const SpdMatrix& s, double max_condition) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(s.matrix());
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  const double condition = hi / lo;
  if (condition > max_condition) {
    std::ostringstream msg;
    msg << "inv_sqrt_spd: condition number " << condition << " exceeds cap " << max_condition;
    throw IllConditionedError(msg.str(), condition);
  }
  const Eigen::VectorXd inv_roots = eig.eigenvalues().cwiseSqrt().cwiseInverse();
  return SpdMatrix(
      symmetrize(eig.eigenvectors() * inv_roots.asDiagonal() * eig.eigenvectors().transpose()));
}

double bures_w2_sq(const SpdMatrix& s0, const SpdMatrix& s1) {
  if (s0.dim() != s1.dim()) {
    throw DimensionError("bures_w2_sq: dimension mismatch " + std::to_string(s0.dim()) + " vs " +
                         std::to_string(s1.dim()));
  }
  const Eigen::MatrixXd r0 = sqrt_spd(s0).matrix();
  // Tr((S0^{1/2} S1 S0^{1/2})^{1/2}) as the sum of square-rooted eigenvalues.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(symmetrize(r0 * s1.matrix() * r0),
                                                     Eigen::EigenvaluesOnly);
  const double cross = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
  const double value = s0.matrix().trace() + s1.matrix().trace() - 2.0 * cross;
  return std::max(0.0, value);
}

}  // namespace bcm
