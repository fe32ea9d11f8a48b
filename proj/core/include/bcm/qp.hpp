#pragma once

#include <Eigen/Core>
#include <optional>

#include "bcm/error.hpp"
#include "bcm/gram.hpp"
#include "bcm/simplex.hpp"

namespace bcm {

struct QpSolution {
  Coordinates lambda;
  double value;  // lambda^T A lambda + c^T lambda, recomputed at the returned point
  int iterations;
  bool converged;
};

struct QpOptions {
  // Relative first-order tolerance: stop when the Frank-Wolfe gap
  // <grad, lambda> - min_i grad_i falls below tol * scale(A, c). The gap
  // bounds the objective suboptimality, and a relative threshold keeps the
  // returned point invariant under positive rescaling of (A, c).
  double tol = 1e-12;
  int max_iters = 200000;
};

/// Thrown when the iteration budget runs out; carries the best iterate seen.
class QpConvergenceError : public ConvergenceError {
 public:
  QpConvergenceError(const std::string& what, double gap, int iterations, QpSolution best_seen)
      : ConvergenceError(what, gap, iterations), best(std::move(best_seen)) {}
  QpSolution best;
};

/// Minimizes lambda^T A lambda + c^T lambda over the probability simplex by
/// accelerated projected gradient with fixed step 1/(2 lambda_max(A)),
/// initialized at the uniform coordinate. Deterministic given inputs.
QpSolution solve_simplex_qp(const GramMatrix& a,
                            const std::optional<Eigen::VectorXd>& c = std::nullopt,
                            const QpOptions& opts = {});

enum class MultiplicityKind { NoExactSolution, Unique, InfinitelyMany };

/// Diagnosis of how the null space of A meets the simplex: no exact minimizer
/// with zero objective, exactly one, or a whole face of them. The witness is
/// the minimum-norm exact minimizer when one exists; face_directions spans the
/// directions of the solution face in the InfinitelyMany case.
struct MultiplicityDiagnosis {
  MultiplicityKind kind;
  std::optional<Coordinates> witness;
  Eigen::MatrixXd face_directions;  // p x m, column basis; empty unless InfinitelyMany
  int null_dim;
};

MultiplicityDiagnosis minimizer_multiplicity(const GramMatrix& a, double tol = 1e-8);

}  // namespace bcm
