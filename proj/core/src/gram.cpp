#include "bcm/gram.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <sstream>

#include "bcm/error.hpp"
#include "bcm/gaussian.hpp"

namespace bcm {

GramMatrix::GramMatrix(Eigen::MatrixXd m) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw DimensionError("GramMatrix: expected a nonempty square matrix");
  }
  const double norm = m.norm();
  const double asym = (m - m.transpose()).norm();
  if (asym > 1e-10 * std::max(norm, 1e-300)) {
    throw ValidationError("GramMatrix: not symmetric, relative asymmetry " +
                          std::to_string(asym / norm));
  }
  m_ = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m_, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  if (lo < -1e-8 * std::max(hi, 0.0) - 1e-14) {
    std::ostringstream msg;
    msg << "GramMatrix: not positive semidefinite, smallest eigenvalue " << lo;
    throw ValidationError(msg.str());
  }
}

GramMatrix gram_from_displacements(const Eigen::MatrixXd& eval_points,
                                   const Eigen::VectorXd& eval_weights,
                                   const std::vector<Eigen::MatrixXd>& displacement_maps) {
  const Eigen::Index n = eval_points.rows();
  const Eigen::Index d = eval_points.cols();
  const int p = static_cast<int>(displacement_maps.size());
  if (p == 0) throw ValidationError("gram_from_displacements: no maps");
  if (eval_weights.size() != n) {
    throw DimensionError("gram_from_displacements: weight length does not match points");
  }
  if (std::abs(eval_weights.sum() - 1.0) > 1e-10 || eval_weights.minCoeff() < 0.0) {
    throw ValidationError("gram_from_displacements: weights must be a PMF, sum is " +
                          std::to_string(eval_weights.sum()));
  }
  for (const auto& t : displacement_maps) {
    if (t.rows() != n || t.cols() != d) {
      throw DimensionError("gram_from_displacements: map evaluated on a different support");
    }
  }
  const Eigen::VectorXd root_w = eval_weights.cwiseSqrt();
  Eigen::MatrixXd blocks(n * d, p);
  for (int i = 0; i < p; ++i) {
    Eigen::MatrixXd disp = displacement_maps[i] - eval_points;
    disp.array().colwise() *= root_w.array();
    blocks.col(i) = Eigen::Map<const Eigen::VectorXd>(disp.data(), n * d);
  }
  Eigen::MatrixXd a = blocks.transpose() * blocks;
  return GramMatrix(0.5 * (a + a.transpose()));
}

GramMatrix gram_gaussian(const SpdMatrix& s0, const std::vector<SpdMatrix>& refs) {
  const int p = static_cast<int>(refs.size());
  if (p == 0) throw ValidationError("gram_gaussian: no reference measures");
  const int d = s0.dim();
  for (const auto& r : refs) {
    if (r.dim() != d) throw DimensionError("gram_gaussian: dimension mismatch");
  }
  const Eigen::MatrixXd root0 = sqrt_spd(s0).matrix();
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(d, d);
  // A_ij = Tr((C_i - I)(C_j - I) S0) = <(C_i - I) S0^{1/2}, (C_j - I) S0^{1/2}>_F.
  Eigen::MatrixXd blocks(d * d, p);
  for (int i = 0; i < p; ++i) {
    const Eigen::MatrixXd e = (transport_matrix(s0, refs[i]) - eye) * root0;
    blocks.col(i) = Eigen::Map<const Eigen::VectorXd>(e.data(), d * d);
  }
  Eigen::MatrixXd a = blocks.transpose() * blocks;
  return GramMatrix(0.5 * (a + a.transpose()));
}

}  // namespace bcm
