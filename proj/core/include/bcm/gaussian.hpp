#pragma once

#include <Eigen/Core>
#include <vector>

#include "bcm/simplex.hpp"
#include "bcm/spd.hpp"

namespace bcm {

/// Linear optimal transport matrix between zero-mean Gaussians:
/// C = S0^{-1/2} (S0^{1/2} Si S0^{1/2})^{1/2} S0^{-1/2}.
/// Symmetric, and satisfies the push-forward identity C S0 C = Si.
Eigen::MatrixXd transport_matrix(const SpdMatrix& s0, const SpdMatrix& si);

struct BarycenterResult {
  SpdMatrix cov;
  int iterations;
  double residual;  // ||sum_i lambda_i C_i - I||_F at the returned iterate
};

/// Fixed-point iteration for the Bures-Wasserstein barycenter of zero-mean
/// Gaussians: S <- S^{-1/2} (sum_i lambda_i (S^{1/2} Si S^{1/2})^{1/2})^2 S^{-1/2},
/// started at the linear mixture sum_i lambda_i Si. Converged when the
/// first-order condition ||sum_i lambda_i C_i - I||_F < tol holds.
BarycenterResult gaussian_barycenter(const Coordinates& lambda, const std::vector<SpdMatrix>& refs,
                                     double tol = 1e-9, int max_iters = 500);

}  // namespace bcm
