#pragma once

#include <Eigen/Core>

#include "bcm/point_cloud.hpp"

namespace bcm {

/// Entrywise squared Euclidean distances between supports, halved when
/// half == true. The two conventions differ by the scale of epsilon; every
/// Gram construction states which one it feeds to the solver.
Eigen::MatrixXd squared_cost_matrix(const PointCloud& a, const PointCloud& b, bool half);

/// Optimal dual pair of the entropic transport problem, normalized so that
/// the weighted softmax identities hold at every sample and the weighted
/// means of f and g agree (the shift constant is split equally).
struct DualPotentials {
  Eigen::VectorXd f;  // source potential
  Eigen::VectorXd g;  // target potential
  double epsilon = 0.0;
  bool half_cost = true;  // cost convention the duals were solved under
};

/// Dense entropic coupling with the marginals it was solved against.
/// Row/column sums must match the marginals within 1e-6 in l1.
struct TransportPlan {
  Eigen::MatrixXd matrix;
  Eigen::VectorXd source_weights;
  Eigen::VectorXd target_weights;

  TransportPlan(Eigen::MatrixXd m, Eigen::VectorXd source, Eigen::VectorXd target);
};

struct SinkhornOptions {
  double tol = 1e-7;      // max of the two marginal l1 residuals
  int max_iters = 10000;  // total budget, including annealing stages
  bool half_cost = true;
  // When > epsilon, start there and halve down to epsilon, warm-starting the
  // potentials at each stage. Cuts iteration counts drastically for small
  // epsilon on wide cost ranges. 0 disables.
  double anneal_from = 0.0;
};

struct SinkhornResult {
  DualPotentials potentials;
  TransportPlan plan;
  int iterations = 0;
  double residual = 0.0;  // final max marginal l1 residual
};

/// Log-domain Sinkhorn iteration (stabilized log-sum-exp updates). Throws
/// ConvergenceError with the last marginal residual if max_iters is exhausted.
SinkhornResult sinkhorn(const PointCloud& a, const PointCloud& b, double epsilon,
                        const SinkhornOptions& opts = {});

/// Naive exponential-domain scaling. Cross-check path for moderate epsilon;
/// throws when the kernel underflows, pointing at the log-domain solver.
/// Requires strictly positive weights.
SinkhornResult sinkhorn_scaling(const PointCloud& a, const PointCloud& b, double epsilon,
                                const SinkhornOptions& opts = {});

/// Entropic transport map estimate at an arbitrary point: the softmax-weighted
/// average of target points under the target potential. Always lands in the
/// convex hull of the targets.
Eigen::VectorXd entropic_map(const Eigen::VectorXd& x, const DualPotentials& potentials,
                             const PointCloud& targets);

/// Row-wise entropic map over a matrix of query points.
Eigen::MatrixXd entropic_map(const Eigen::MatrixXd& xs, const DualPotentials& potentials,
                             const PointCloud& targets);

/// Conditional means of the targets given each source atom:
/// row j of diag(1/p) pi Y. Rows with zero source weight and zero plan mass
/// are returned as zeros.
Eigen::MatrixXd barycentric_projection(const TransportPlan& plan,
                                       const Eigen::VectorXd& source_weights,
                                       const PointCloud& targets);

/// Frobenius inner product of a plan and a cost matrix; the W2^2 surrogate.
double entropic_cost(const TransportPlan& plan, const Eigen::MatrixXd& cost);

/// Largest violation of the two softmax normalization identities over all
/// source and target samples. Test and diagnostics aid.
double potential_identity_residual(const DualPotentials& potentials, const PointCloud& a,
                                   const PointCloud& b);

}  // namespace bcm
