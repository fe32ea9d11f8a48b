#include <fstream>
#include <iostream>

#include "bcm/error.hpp"
#include "bcm/idx.hpp"
#include "bcm/inpaint.hpp"
#include "commands.hpp"

namespace bcm::cli {

namespace {

std::vector<RawImage> load_mnist_digit(const std::string& images_path,
                                       const std::string& labels_path, int digit) {
  const IdxDataset images = read_idx(images_path);
  const IdxDataset labels = read_idx(labels_path);
  if (images.dims.size() != 3) {
    throw ConfigError("mnist images: expected a 3-dimensional IDX file");
  }
  if (labels.dims.size() != 1 || labels.dims[0] != images.dims[0]) {
    throw ConfigError("mnist labels: expected one label per image");
  }
  const int count = static_cast<int>(images.dims[0]);
  const int h = static_cast<int>(images.dims[1]);
  const int w = static_cast<int>(images.dims[2]);
  std::vector<RawImage> out;
  for (int k = 0; k < count; ++k) {
    if (labels.payload[k] != digit) continue;
    Eigen::MatrixXi px(h, w);
    for (int i = 0; i < h; ++i)
      for (int j = 0; j < w; ++j)
        px(i, j) = images.payload[static_cast<std::size_t>(k) * h * w + i * w + j];
    if (px.maxCoeff() == 0) continue;  // skip degenerate blanks
    out.emplace_back(px);
  }
  return out;
}

}  // namespace

void cmd_inpaint(RunConfig& config) {
  InpaintConfig experiment;
  const std::string mode = config.get_string("mode", "occlude");
  if (mode == "occlude") {
    experiment.mode = InpaintConfig::Mode::Occlude;
    experiment.occlude_side = config.get_int("occlude_size", 8);
  } else if (mode == "noise") {
    experiment.mode = InpaintConfig::Mode::Noise;
    experiment.alpha = config.get_double("alpha", 0.5);
  } else {
    throw ConfigError("config key 'mode': expected occlude or noise, got '" + mode + "'");
  }
  experiment.refs = config.get_int("p", 10);
  experiment.trials = config.get_int("trials", 1);
  experiment.seed = config.get_seed();
  experiment.epsilon = config.get_double("epsilon", 10.0);
  experiment.score_epsilon = config.get_double("score_epsilon", 0.1);
  experiment.threads = threads_from_config(config);
  experiment.sinkhorn.tol = config.get_double("sinkhorn_tol", 1e-7);
  experiment.sinkhorn.max_iters = config.get_int("sinkhorn_max_iters", 50000);
  experiment.sinkhorn.anneal_from = config.get_double("anneal_from", 256.0);
  experiment.ibp.tol = config.get_double("ibp_tol", 1e-7);
  experiment.ibp.max_iters = config.get_int("ibp_max_iters", 5000);

  const std::string data = config.get_string("data", "synthetic");
  if (data == "mnist") {
    experiment.images = load_mnist_digit(config.require_string("mnist_images"),
                                         config.require_string("mnist_labels"),
                                         config.get_int("digit", 4));
  } else if (data != "synthetic") {
    throw ConfigError("config key 'data': expected synthetic or mnist, got '" + data + "'");
  }

  const std::string save = config.get_string("save_grids", "all");
  if (save != "all" && save != "first" && save != "none") {
    throw ConfigError("config key 'save_grids': expected all, first or none");
  }
  const std::string out = ensure_out_dir(config.get_string("out", ""));
  config.reject_unknown();

  const auto results = run_inpaint_experiment(experiment);

  const Metadata meta = config.metadata();
  int wins = 0;
  double mean_bcm = 0.0, mean_linear = 0.0;
  const std::string scores_path = join_path(out, "scores.csv");
  std::ofstream scores(scores_path, std::ios::trunc);
  if (!scores) throw ValidationError("cannot open " + scores_path + " for writing");
  scores << meta.to_block();
  scores << "trial,w2sq_bcm,w2sq_linear\n";
  for (const auto& r : results) {
    scores << r.trial << ',' << format_double(r.w2sq_bcm) << ','
           << format_double(r.w2sq_linear) << '\n';
    wins += r.w2sq_bcm <= r.w2sq_linear ? 1 : 0;
    mean_bcm += r.w2sq_bcm;
    mean_linear += r.w2sq_linear;

    const bool keep = save == "all" || (save == "first" && r.trial == 0);
    if (keep) {
      const std::string tag = std::to_string(r.trial);
      write_grid_csv(join_path(out, "clean_" + tag + ".csv"), r.clean, &meta);
      write_grid_csv(join_path(out, "corrupted_" + tag + ".csv"), r.corrupted, &meta);
      write_grid_csv(join_path(out, "bcm_" + tag + ".csv"), r.bcm_reconstruction, &meta);
      write_grid_csv(join_path(out, "linear_" + tag + ".csv"), r.linear_reconstruction, &meta);
    }
  }
  mean_bcm /= results.size();
  mean_linear /= results.size();

  std::cout << "inpaint: mean W2^2 bcm " << mean_bcm << ", linear " << mean_linear << ", bcm <= linear in "
            << wins << "/" << results.size() << " trials, wrote " << out << "\n";
}

}  // namespace bcm::cli
