#include <iostream>
#include <sstream>
#include <vector>

#include "bcm/error.hpp"
#include "bcm/gaussian.hpp"
#include "bcm/synthesis.hpp"
#include "commands.hpp"

namespace bcm::cli {

namespace {

// Coordinates from either an inline comma list or a coords CSV file.
Coordinates parse_lambda(const std::string& spec, int expected) {
  if (spec.find(',') == std::string::npos && spec.find(".csv") != std::string::npos) {
    const Coordinates c = read_coords_csv(spec);
    if (c.size() != expected) {
      throw ConfigError("lambda file has " + std::to_string(c.size()) + " entries for " +
                        std::to_string(expected) + " references");
    }
    return c;
  }
  std::vector<double> vals;
  std::istringstream in(spec);
  std::string field;
  while (std::getline(in, field, ',')) {
    try {
      vals.push_back(std::stod(field));
    } catch (const std::exception&) {
      throw ConfigError("config key 'lambda': bad entry '" + field + "'");
    }
  }
  if (static_cast<int>(vals.size()) != expected) {
    throw ConfigError("lambda has " + std::to_string(vals.size()) + " entries for " +
                      std::to_string(expected) + " references");
  }
  Eigen::VectorXd v(vals.size());
  for (std::size_t i = 0; i < vals.size(); ++i) v(static_cast<int>(i)) = vals[i];
  try {
    return Coordinates(v);
  } catch (const ValidationError& e) {
    throw ConfigError(std::string("config key 'lambda': ") + e.what());
  }
}

}  // namespace

void cmd_synthesize(RunConfig& config) {
  const std::string method = config.get_string("method", "quantile");
  const std::vector<std::string> ref_paths = config.get_string_list("refs");
  const std::string lambda_spec = config.require_string("lambda");
  const std::string out = ensure_out_dir(config.get_string("out", ""));
  const std::uint64_t seed = config.get_seed();
  (void)seed;

  const Coordinates lambda = parse_lambda(lambda_spec, static_cast<int>(ref_paths.size()));
  const Metadata meta = config.metadata();

  if (method == "quantile") {
    config.reject_unknown();
    std::vector<Sorted1DSample> refs;
    for (const auto& path : ref_paths) {
      const PointCloud cloud = read_pointcloud_csv(path);
      if (cloud.dim() != 1) throw ConfigError("quantile synthesis requires 1D clouds: " + path);
      refs.emplace_back(cloud.points.col(0));
    }
    const Sorted1DSample bary = quantile_barycenter_1d(lambda, refs);
    write_pointcloud_csv(join_path(out, "barycenter.csv"),
                         PointCloud::uniform(bary.values), &meta);
  } else if (method == "gaussian") {
    const double tol = config.get_double("bc_tol", 1e-9);
    const int max_iters = config.get_int("bc_max_iters", 500);
    config.reject_unknown();
    std::vector<SpdMatrix> refs;
    for (const auto& path : ref_paths) refs.push_back(read_spd_csv(path));
    const BarycenterResult bary = gaussian_barycenter(lambda, refs, tol, max_iters);
    write_spd_csv(join_path(out, "barycenter.csv"), bary.cov, &meta);
    std::cout << "synthesize: fixed point reached in " << bary.iterations
              << " iterations, residual " << bary.residual << "\n";
  } else if (method == "grid") {
    const double epsilon = config.get_double("epsilon", 10.0);
    IbpOptions opts;
    opts.tol = config.get_double("ibp_tol", 1e-7);
    opts.max_iters = config.get_int("ibp_max_iters", 5000);
    config.reject_unknown();
    std::vector<GridMeasure> refs;
    for (const auto& path : ref_paths) refs.push_back(read_grid_csv(path));
    const GridMeasure bary = ibp_barycenter(lambda, refs, epsilon, opts);
    write_grid_csv(join_path(out, "barycenter.csv"), bary, &meta);
  } else {
    throw ConfigError("config key 'method': expected quantile, gaussian or grid, got '" +
                      method + "'");
  }
  std::cout << "synthesize: wrote " << join_path(out, "barycenter.csv") << "\n";
}

}  // namespace bcm::cli
