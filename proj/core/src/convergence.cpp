#include "bcm/convergence.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "bcm/analysis.hpp"
#include "bcm/covariance_experiment.hpp"
#include "bcm/error.hpp"
#include "bcm/gaussian.hpp"
#include "bcm/parallel.hpp"
#include "bcm/rng.hpp"

namespace bcm {

namespace {

double median(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  const std::size_t n = xs.size();
  return n % 2 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

struct GaussianTruth {
  std::vector<SpdMatrix> refs;
  SpdMatrix query_cov;
  Eigen::MatrixXd roots;  // d x d blocks: query root then reference roots
};

struct Sorted1DTruth {
  Eigen::VectorXd mu, sigma;  // references
  double mu0, sigma0;         // query (exact barycenter of the family)
};

}  // namespace

std::vector<ConvergenceRow> run_convergence_study(const ConvergenceConfig& config) {
  if (config.p <= 0 || config.d <= 0) throw ConfigError("convergence study: p, d must be positive");
  if (config.seeds <= 0) throw ConfigError("convergence study: seeds must be positive");
  if (config.sample_sizes.empty()) throw ConfigError("convergence study: empty sample sweep");
  for (const int n : config.sample_sizes) {
    if (n <= 0) throw ConfigError("convergence study: sample sizes must be positive");
  }

  auto family_rng = make_stream(config.seed, 0);
  Eigen::VectorXd lambda_star;
  if (config.lambda.has_value()) {
    if (config.lambda->size() != config.p) {
      throw ConfigError("convergence study: lambda length does not match p");
    }
    lambda_star = *config.lambda;
  } else {
    lambda_star = sample_uniform_simplex(family_rng, config.p);
  }
  const Coordinates lambda_coords(lambda_star);

  // Family construction and the exact Gram matrix.
  Eigen::MatrixXd exact;
  std::vector<SpdMatrix> gauss_refs;
  Eigen::MatrixXd gauss_query_root;
  std::vector<Eigen::MatrixXd> gauss_ref_roots;
  Sorted1DTruth line{Eigen::VectorXd(config.p), Eigen::VectorXd(config.p), 0.0, 0.0};

  if (config.family == ConvergenceConfig::Family::Gaussian) {
    for (int i = 0; i < config.p; ++i) {
      const Eigen::MatrixXd g = sample_standard_normal(family_rng, config.d, config.d);
      gauss_refs.emplace_back(g * g.transpose() / config.d +
                              0.5 * Eigen::MatrixXd::Identity(config.d, config.d));
    }
    const BarycenterResult bary = gaussian_barycenter(lambda_coords, gauss_refs, 1e-11, 1000);
    exact = gram_gaussian(bary.cov, gauss_refs).matrix();
    gauss_query_root = sqrt_spd(bary.cov).matrix();
    for (const auto& r : gauss_refs) gauss_ref_roots.push_back(sqrt_spd(r).matrix());
  } else {
    std::normal_distribution<double> normal(0.0, 1.0);
    for (int i = 0; i < config.p; ++i) {
      line.mu(i) = 2.0 * normal(family_rng);
      line.sigma(i) = 0.3 + std::exp(0.4 * normal(family_rng));
    }
    line.mu0 = lambda_star.dot(line.mu);
    line.sigma0 = lambda_star.dot(line.sigma);
    exact = (line.sigma.array() - line.sigma0).matrix() *
                (line.sigma.array() - line.sigma0).matrix().transpose() +
            (line.mu.array() - line.mu0).matrix() *
                (line.mu.array() - line.mu0).matrix().transpose();
  }

  std::vector<ConvergenceRow> rows;
  for (const int n : config.sample_sizes) {
    const double eps = config.epsilon.has_value()
                           ? *config.epsilon
                           : config.epsilon_scale * std::pow(n, -1.0 / 6.0);

    std::vector<double> entry_errs(config.seeds);
    std::vector<double> lambda_errs(config.seeds);
    parallel_for(config.seeds, config.threads, [&](int s) {
      auto rng = make_stream(config.seed, static_cast<std::uint64_t>(s) + 1);
      Eigen::MatrixXd estimated;

      if (config.estimator == ConvergenceConfig::Estimator::Exact) {
        estimated = exact;
      } else if (config.family == ConvergenceConfig::Family::Gaussian) {
        // Entropic maps fitted on the first half of the query samples,
        // evaluated on the held-out half.
        const Eigen::MatrixXd xs =
            sample_standard_normal(rng, 2 * n, config.d) * gauss_query_root;
        const PointCloud fit_cloud = PointCloud::uniform(xs.topRows(n));
        const Eigen::MatrixXd held = xs.bottomRows(n);
        std::vector<Eigen::MatrixXd> maps(config.p);
        for (int i = 0; i < config.p; ++i) {
          const Eigen::MatrixXd ys =
              sample_standard_normal(rng, n, config.d) * gauss_ref_roots[i];
          const PointCloud target = PointCloud::uniform(ys);
          SinkhornOptions opts = config.sinkhorn;
          opts.half_cost = true;
          const SinkhornResult sk = sinkhorn(fit_cloud, target, eps, opts);
          maps[i] = entropic_map(held, sk.potentials, target);
        }
        estimated = gram_from_displacements(held, Eigen::VectorXd::Constant(n, 1.0 / n), maps)
                        .matrix();
      } else {
        std::normal_distribution<double> normal(0.0, 1.0);
        Eigen::VectorXd xs(n);
        for (int k = 0; k < n; ++k) xs(k) = line.mu0 + line.sigma0 * normal(rng);
        const Sorted1DSample query(xs);
        std::vector<Eigen::MatrixXd> maps(config.p);
        for (int i = 0; i < config.p; ++i) {
          Eigen::VectorXd ys(n);
          for (int k = 0; k < n; ++k) ys(k) = line.mu(i) + line.sigma(i) * normal(rng);
          maps[i] = monotone_map_1d(query, Sorted1DSample(ys));
        }
        estimated = gram_from_displacements(query.values,
                                            Eigen::VectorXd::Constant(n, 1.0 / n), maps)
                        .matrix();
      }

      entry_errs[s] = (estimated - exact).cwiseAbs().maxCoeff();
      const QpSolution sol = solve_simplex_qp(GramMatrix(estimated));
      lambda_errs[s] = (sol.lambda.lambda - lambda_star).norm();
    });

    rows.push_back(ConvergenceRow{n, eps, median(entry_errs), median(lambda_errs)});
  }
  return rows;
}

}  // namespace bcm
