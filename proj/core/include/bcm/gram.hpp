#pragma once

#include <Eigen/Core>
#include <vector>

#include "bcm/spd.hpp"

namespace bcm {

/// Gram matrix of displacement-map inner products. Symmetric within 1e-10
/// relative tolerance and positive semidefinite up to 1e-8 of the spectral
/// radius; construction validates and stores the symmetrized part.
class GramMatrix {
 public:
  explicit GramMatrix(Eigen::MatrixXd m);

  int size() const { return static_cast<int>(m_.rows()); }
  const Eigen::MatrixXd& matrix() const { return m_; }
  double operator()(int i, int j) const { return m_(i, j); }

 private:
  Eigen::MatrixXd m_;
};

/// Weighted Gram matrix of displacements: A_ij = sum_k w_k <T^i_k - x_k, T^j_k - x_k>.
/// Built as D^T D for D the weighted displacement block, so the result is PSD
/// by construction. Weights must sum to 1 (uniform 1/n gives the sample mean).
GramMatrix gram_from_displacements(const Eigen::MatrixXd& eval_points,
                                   const Eigen::VectorXd& eval_weights,
                                   const std::vector<Eigen::MatrixXd>& displacement_maps);

/// Closed-form Gram matrix for zero-mean Gaussians:
/// A_ij = Tr((C_i - I)(C_j - I) S0) with C_i the transport matrix from S0 to
/// refs[i]. Assembled as a Gram of (C_i - I) S0^{1/2} blocks, hence PSD.
GramMatrix gram_gaussian(const SpdMatrix& s0, const std::vector<SpdMatrix>& refs);

}  // namespace bcm
