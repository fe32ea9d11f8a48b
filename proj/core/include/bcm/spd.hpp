#pragma once

#include <Eigen/Core>

namespace bcm {

/// Symmetric positive definite matrix. Construction validates symmetry
/// (1e-12 relative Frobenius) and strict positive definiteness (eigenvalues
/// below 1e-12 of the largest are rejected), then stores the symmetrized part.
class SpdMatrix {
 public:
  explicit SpdMatrix(Eigen::MatrixXd m);

  static SpdMatrix identity(int dim);

  int dim() const { return static_cast<int>(m_.rows()); }
  const Eigen::MatrixXd& matrix() const { return m_; }
  double operator()(int i, int j) const { return m_(i, j); }

 private:
  Eigen::MatrixXd m_;
};

/// Zero-mean Gaussians are represented by their covariance.
using GaussianMeasure = SpdMatrix;

/// Unique SPD square root, by symmetric eigendecomposition.
SpdMatrix sqrt_spd(const SpdMatrix& s);

/// Newton-Schulz iteration for the SPD square root. Alternative code path for
/// benchmarking; agrees with sqrt_spd to 1e-8 on well-conditioned inputs.
SpdMatrix sqrt_spd_newton_schulz(const SpdMatrix& s, int max_iters = 50);

/// SPD inverse square root: returns B with B*S*B = I.
/// Throws IllConditionedError when cond(S) exceeds max_condition.
SpdMatrix inv_sqrt_spd(const SpdMatrix& s, double max_condition = 1e14);

/// Squared Bures-Wasserstein distance between zero-mean Gaussians:
/// Tr(S0) + Tr(S1) - 2 Tr((S0^{1/2} S1 S0^{1/2})^{1/2}).
double bures_w2_sq(const SpdMatrix& s0, const SpdMatrix& s1);

}  // namespace bcm
