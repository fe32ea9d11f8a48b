#include "bcm/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "bcm/error.hpp"

namespace bcm {

Coordinates::Coordinates(Eigen::VectorXd l) : lambda(std::move(l)) {
  if (lambda.size() == 0) throw ValidationError("Coordinates: empty vector");
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    if (lambda(i) < -1e-12 || !std::isfinite(lambda(i))) {
      throw ValidationError("Coordinates: entry " + std::to_string(i) + " = " +
                            std::to_string(lambda(i)) + " is not a valid simplex coordinate");
    }
    if (lambda(i) < 0.0) lambda(i) = 0.0;
  }
  if (std::abs(lambda.sum() - 1.0) > 1e-10) {
    throw ValidationError("Coordinates: entries sum to " + std::to_string(lambda.sum()));
  }
}

Coordinates Coordinates::uniform(int p) {
  return Coordinates(Eigen::VectorXd::Constant(p, 1.0 / static_cast<double>(p)));
}

Coordinates project_simplex(const Eigen::VectorXd& v) {
  const int p = static_cast<int>(v.size());
  if (p == 0) throw ValidationError("project_simplex: empty vector");
  for (int i = 0; i < p; ++i) {
    if (!std::isfinite(v(i))) throw ValidationError("project_simplex: non-finite entry");
  }
  std::vector<double> u(v.data(), v.data() + p);
  std::sort(u.begin(), u.end(), std::greater<double>());
  double css = 0.0;
  double tau = 0.0;
  for (int k = 0; k < p; ++k) {
    css += u[k];
    const double t = (css - 1.0) / static_cast<double>(k + 1);
    if (u[k] - t > 0.0) tau = t;
  }
  Eigen::VectorXd y = (v.array() - tau).cwiseMax(0.0);
  return Coordinates(std::move(y));
}

}  // namespace bcm
