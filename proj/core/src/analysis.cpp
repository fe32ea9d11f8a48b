#include "bcm/analysis.hpp"

#include "bcm/error.hpp"
#include "bcm/parallel.hpp"

namespace bcm {

CoordinateEstimate estimate_coords(const PointCloud& query, const std::vector<PointCloud>& refs,
                                   double epsilon, const SinkhornOptions& sinkhorn_opts,
                                   const QpOptions& qp_opts, int threads) {
  const int p = static_cast<int>(refs.size());
  if (p == 0) throw ValidationError("estimate_coords: no reference measures");

  SinkhornOptions opts = sinkhorn_opts;
  opts.half_cost = false;  // unhalved squared distances throughout this path

  std::vector<Eigen::MatrixXd> transport_estimates(p);
  parallel_for(p, threads, [&](int i) {
    const SinkhornResult sk = sinkhorn(query, refs[i], epsilon, opts);
    transport_estimates[i] = barycentric_projection(sk.plan, query.weights, refs[i]);
  });

  GramMatrix gram = gram_from_displacements(query.points, query.weights, transport_estimates);
  QpSolution sol = solve_simplex_qp(gram, std::nullopt, qp_opts);
  return CoordinateEstimate{std::move(sol), std::move(gram)};
}

CoordinateEstimate estimate_coords_exact_1d(const Sorted1DSample& query,
                                            const std::vector<Sorted1DSample>& refs,
                                            const QpOptions& qp_opts) {
  const int p = static_cast<int>(refs.size());
  if (p == 0) throw ValidationError("estimate_coords_exact_1d: no reference samples");
  const int n = query.size();
  std::vector<Eigen::MatrixXd> maps(p);
  for (int i = 0; i < p; ++i) {
    maps[i] = monotone_map_1d(query, refs[i]);
  }
  const Eigen::VectorXd weights = Eigen::VectorXd::Constant(n, 1.0 / n);
  GramMatrix gram = gram_from_displacements(query.values, weights, maps);
  QpSolution sol = solve_simplex_qp(gram, std::nullopt, qp_opts);
  return CoordinateEstimate{std::move(sol), std::move(gram)};
}

CoordinateEstimate estimate_coords_gaussian(const SpdMatrix& s0,
                                            const std::vector<SpdMatrix>& refs,
                                            const QpOptions& qp_opts) {
  GramMatrix gram = gram_gaussian(s0, refs);
  QpSolution sol = solve_simplex_qp(gram, std::nullopt, qp_opts);
  return CoordinateEstimate{std::move(sol), std::move(gram)};
}

}  // namespace bcm
