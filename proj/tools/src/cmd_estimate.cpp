#include <chrono>
#include <iostream>
#include <vector>

#include "bcm/analysis.hpp"
#include "bcm/error.hpp"
#include "commands.hpp"

namespace bcm::cli {

namespace {

Sorted1DSample as_sorted_1d(const PointCloud& cloud, const std::string& path) {
  if (cloud.dim() != 1) {
    throw ConfigError("maps=exact1d requires 1D point clouds, " + path + " has dimension " +
                      std::to_string(cloud.dim()));
  }
  const double uniform = 1.0 / cloud.size();
  if ((cloud.weights.array() - uniform).abs().maxCoeff() > 1e-9) {
    throw ConfigError("maps=exact1d requires uniform weights in " + path);
  }
  return Sorted1DSample(cloud.points.col(0));
}

std::string diagnosis_line(const MultiplicityDiagnosis& diag) {
  switch (diag.kind) {
    case MultiplicityKind::NoExactSolution:
      return "no-exact-solution";
    case MultiplicityKind::Unique:
      return "unique";
    case MultiplicityKind::InfinitelyMany:
      return "infinitely-many";
  }
  return "?";
}

}  // namespace

void cmd_estimate_coords(RunConfig& config) {
  const std::string query_path = config.require_string("query");
  const std::vector<std::string> ref_paths = config.get_string_list("refs");
  const std::string maps = config.get_string("maps", "entropic");
  const std::string out = ensure_out_dir(config.get_string("out", ""));
  const std::uint64_t seed = config.get_seed();
  (void)seed;  // deterministic command; echoed in metadata for uniformity

  QpOptions qp;
  qp.tol = config.get_double("qp_tol", 1e-12);
  qp.max_iters = config.get_int("qp_max_iters", 200000);

  const auto started = std::chrono::steady_clock::now();
  CoordinateEstimate estimate = [&]() {
    if (maps == "exact1d") {
      config.reject_unknown();
      const Sorted1DSample query = as_sorted_1d(read_pointcloud_csv(query_path), query_path);
      std::vector<Sorted1DSample> refs;
      for (const auto& path : ref_paths) refs.push_back(as_sorted_1d(read_pointcloud_csv(path), path));
      return estimate_coords_exact_1d(query, refs, qp);
    }
    if (maps != "entropic") {
      throw ConfigError("config key 'maps': expected entropic or exact1d, got '" + maps + "'");
    }
    const double epsilon = config.get_double("epsilon", 1.0);
    SinkhornOptions sk;
    sk.tol = config.get_double("sinkhorn_tol", 1e-7);
    sk.max_iters = config.get_int("sinkhorn_max_iters", 10000);
    sk.anneal_from = config.get_double("anneal_from", 0.0);
    const int threads = threads_from_config(config);
    config.reject_unknown();
    const PointCloud query = read_pointcloud_csv(query_path);
    std::vector<PointCloud> refs;
    for (const auto& path : ref_paths) refs.push_back(read_pointcloud_csv(path));
    return estimate_coords(query, refs, epsilon, sk, qp, threads);
  }();
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

  const MultiplicityDiagnosis diag = minimizer_multiplicity(estimate.gram);

  const Metadata meta = config.metadata();
  write_coords_csv(join_path(out, "coordinates.csv"), estimate.solution.lambda, &meta);
  write_gram_csv(join_path(out, "gram.csv"), estimate.gram, &meta);

  std::vector<std::string> report;
  report.push_back("objective = " + format_double(estimate.solution.value));
  report.push_back("iterations = " + std::to_string(estimate.solution.iterations));
  report.push_back("converged = " + std::string(estimate.solution.converged ? "yes" : "no"));
  report.push_back("multiplicity = " + diagnosis_line(diag));
  if (diag.witness.has_value()) {
    std::string witness = "witness =";
    for (int i = 0; i < diag.witness->size(); ++i) {
      witness += " " + format_double(diag.witness->lambda(i));
    }
    report.push_back(witness);
  }
  write_report(join_path(out, "report.txt"), meta, report);

  std::cout << "estimate-coords: objective " << estimate.solution.value << ", multiplicity "
            << diagnosis_line(diag) << ", wrote " << out << " (" << elapsed << "s)\n";
}

}  // namespace bcm::cli
