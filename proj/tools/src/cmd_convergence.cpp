#include <fstream>
#include <iostream>

#include "bcm/convergence.hpp"
#include "bcm/error.hpp"
#include "commands.hpp"

namespace bcm::cli {

void cmd_convergence(RunConfig& config) {
  ConvergenceConfig study;
  const std::string family = config.get_string("family", "gaussian");
  if (family == "gaussian") {
    study.family = ConvergenceConfig::Family::Gaussian;
    study.d = config.get_int("d", 2);
  } else if (family == "sorted1d") {
    study.family = ConvergenceConfig::Family::Sorted1D;
    study.d = 1;
  } else {
    throw ConfigError("config key 'family': expected gaussian or sorted1d, got '" + family +
                      "'");
  }
  const std::string estimator = config.get_string("estimator", "sampled");
  if (estimator == "sampled") {
    study.estimator = ConvergenceConfig::Estimator::Sampled;
  } else if (estimator == "exact") {
    study.estimator = ConvergenceConfig::Estimator::Exact;
  } else {
    throw ConfigError("config key 'estimator': expected sampled or exact, got '" + estimator +
                      "'");
  }
  study.p = config.get_int("p", 2);
  study.sample_sizes = config.get_int_list("n_sweep", {100, 400, 1600});
  study.seeds = config.get_int("seeds", 10);
  study.seed = config.get_seed();
  study.threads = threads_from_config(config);
  if (config.has("epsilon")) study.epsilon = config.get_double("epsilon", 0.0);
  study.epsilon_scale = config.get_double("epsilon_scale", 3.0);
  study.sinkhorn.tol = config.get_double("sinkhorn_tol", 1e-7);
  study.sinkhorn.max_iters = config.get_int("sinkhorn_max_iters", 20000);
  const std::string out = ensure_out_dir(config.get_string("out", ""));
  config.reject_unknown();

  const auto rows = run_convergence_study(study);

  const std::string path = join_path(out, "convergence.csv");
  std::ofstream file(path, std::ios::trunc);
  if (!file) throw ValidationError("cannot open " + path + " for writing");
  file << config.metadata().to_block();
  file << "n,epsilon,median_entry_err,median_lambda_err\n";
  for (const auto& row : rows) {
    file << row.n << ',' << format_double(row.epsilon) << ','
         << format_double(row.median_entry_err) << ',' << format_double(row.median_lambda_err)
         << '\n';
  }
  std::cout << "convergence: " << rows.size() << " sweep points written to " << path << "\n";
}

}  // namespace bcm::cli
