#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "bcm/csv_io.hpp"
#include "bcm/rng.hpp"
#include "bcm/simplex.hpp"
#include "bcm/synthesis.hpp"
#include "doctest.h"

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code;
  std::string output;
};

RunResult run_cli(const std::string& args) {
  const std::string command = std::string(BCM_CLI_PATH) + " " + args + " 2>&1";
  std::array<char, 4096> buffer;
  std::string output;
  FILE* pipe = popen(command.c_str(), "r");
  REQUIRE(pipe != nullptr);
  while (fgets(buffer.data(), buffer.size(), pipe)) output += buffer.data();
  const int status = pclose(pipe);
  return RunResult{WEXITSTATUS(status), output};
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("bcm_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_config(const fs::path& path, const std::string& body) {
  std::ofstream out(path);
  out << body;
}

// Every output file must open with the metadata block.
void check_metadata(const fs::path& dir) {
  int checked = 0;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    std::ifstream in(entry.path());
    std::string first;
    std::getline(in, first);
    INFO("file ", entry.path().string());
    CHECK(first.rfind("# tool = bcm", 0) == 0);
    ++checked;
  }
  CHECK(checked > 0);
}

// Byte-compare every file of two directories.
void check_dirs_equal(const fs::path& a, const fs::path& b) {
  std::vector<std::string> names;
  for (const auto& entry : fs::directory_iterator(a)) names.push_back(entry.path().filename());
  CHECK(!names.empty());
  for (const auto& name : names) {
    INFO("file ", name);
    REQUIRE(fs::exists(b / name));
    CHECK(slurp(a / name) == slurp(b / name));
  }
}

// Three compatible 1D reference files plus a barycenter query with planted
// coordinates.
struct QuantileFixture {
  fs::path dir;
  std::vector<std::string> ref_paths;
  std::string query_path;
  Eigen::Vector3d planted;
};

QuantileFixture make_quantile_fixture(const std::string& name, int n) {
  QuantileFixture fx;
  fx.dir = fresh_dir(name);
  fx.planted = Eigen::Vector3d(0.2, 0.3, 0.5);
  auto rng = bcm::make_stream(314);
  std::vector<bcm::Sorted1DSample> refs;
  for (int i = 0; i < 3; ++i) {
    Eigen::VectorXd values =
        (bcm::sample_standard_normal(rng, n, 1).array() * (1.0 + 0.4 * i) + 2.0 * i).matrix();
    refs.emplace_back(values);
    const fs::path path = fx.dir / ("ref" + std::to_string(i) + ".csv");
    bcm::write_pointcloud_csv(path.string(), bcm::PointCloud::uniform(refs.back().values));
    fx.ref_paths.push_back(path.string());
  }
  const auto bary = bcm::quantile_barycenter_1d(
      bcm::Coordinates(Eigen::VectorXd(fx.planted)), refs);
  const fs::path query = fx.dir / "query.csv";
  bcm::write_pointcloud_csv(query.string(), bcm::PointCloud::uniform(bary.values));
  fx.query_path = query.string();
  return fx;
}

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += ",";
    out += parts[i];
  }
  return out;
}

}  // namespace

TEST_CASE("cli: estimate-coords recovers planted 1D coordinates on the exact path") {
  const auto fx = make_quantile_fixture("estimate_exact", 120);
  const fs::path out = fresh_dir("estimate_exact_out");
  const auto res = run_cli("estimate-coords --out " + out.string() + " --seed 1");
  CHECK(res.exit_code == 2);  // missing required query/refs keys

  const fs::path config = fx.dir / "run.conf";
  write_config(config, "query = " + fx.query_path + "\nrefs = " + join(fx.ref_paths) +
                           "\nmaps = exact1d\n");
  const auto ok = run_cli("estimate-coords --config " + config.string() + " --out " +
                          out.string() + " --seed 1");
  CHECK(ok.exit_code == 0);
  const auto coords = bcm::read_coords_csv((out / "coordinates.csv").string());
  for (int i = 0; i < 3; ++i) CHECK(coords.lambda(i) == doctest::Approx(fx.planted(i)).epsilon(1e-4));
  check_metadata(out);

  const std::string report = slurp(out / "report.txt");
  CHECK(report.find("multiplicity =") != std::string::npos);
  CHECK(report.find("objective =") != std::string::npos);
}

TEST_CASE("cli: estimate-coords on the entropic path favors a duplicated reference") {
  const auto fx = make_quantile_fixture("estimate_entropic", 40);
  const fs::path out = fresh_dir("estimate_entropic_out");
  const fs::path config = fx.dir / "run.conf";
  // The query file duplicates reference 0.
  write_config(config, "query = " + fx.ref_paths[0] + "\nrefs = " + join(fx.ref_paths) +
                           "\nepsilon = 0.1\nanneal_from = 4\n");
  const auto res = run_cli("estimate-coords --config " + config.string() + " --out " +
                           out.string());
  CHECK(res.exit_code == 0);
  const auto coords = bcm::read_coords_csv((out / "coordinates.csv").string());
  CHECK(coords.lambda(0) > 0.95);
}

TEST_CASE("cli: estimate-coords rejects unknown keys and p=1 is trivial") {
  const auto fx = make_quantile_fixture("estimate_misc", 30);
  const fs::path out = fresh_dir("estimate_misc_out");
  const fs::path config = fx.dir / "run.conf";
  write_config(config, "query = " + fx.query_path + "\nrefs = " + fx.ref_paths[0] +
                           "\nmaps = exact1d\nnot_a_key = 3\n");
  const auto bad = run_cli("estimate-coords --config " + config.string() + " --out " +
                           out.string());
  CHECK(bad.exit_code == 2);
  CHECK(bad.output.find("not_a_key") != std::string::npos);

  write_config(config,
               "query = " + fx.query_path + "\nrefs = " + fx.query_path + "\nmaps = exact1d\n");
  const auto ok = run_cli("estimate-coords --config " + config.string() + " --out " +
                          out.string());
  CHECK(ok.exit_code == 0);
  const auto coords = bcm::read_coords_csv((out / "coordinates.csv").string());
  REQUIRE(coords.size() == 1);
  CHECK(coords.lambda(0) == doctest::Approx(1.0));
}

TEST_CASE("cli: covariance validates config and emits the error table") {
  const fs::path out = fresh_dir("covariance_out");
  // trials=0 must be rejected up front.
  const fs::path config = out / "bad.conf";
  write_config(config, "trials = 0\n");
  const auto rejected =
      run_cli("covariance --config " + config.string() + " --out " + out.string());
  CHECK(rejected.exit_code == 2);

  const fs::path good = out / "good.conf";
  write_config(good, "p = 2\nd = 2\ntrials = 2\nsample_sizes = 15,40\n");
  const auto res = run_cli("covariance --config " + good.string() + " --out " + out.string() +
                           " --seed 5 --threads 2");
  CHECK(res.exit_code == 0);
  const std::string table = slurp(out / "results.csv");
  CHECK(table.find("n,trial,w2_bcm,w2_empirical,lambda_err") != std::string::npos);
  CHECK(table.find("\n15,0,") != std::string::npos);
  CHECK(table.find("\n40,1,") != std::string::npos);
  check_metadata(out);
}

TEST_CASE("cli: synthesize quantile/gaussian/grid methods") {
  const auto fx = make_quantile_fixture("synthesize", 50);
  const fs::path out = fresh_dir("synthesize_out");
  const fs::path config = fx.dir / "synth.conf";
  write_config(config, "method = quantile\nlambda = 0.2,0.3,0.5\nrefs = " + join(fx.ref_paths) +
                           "\n");
  const auto res = run_cli("synthesize --config " + config.string() + " --out " + out.string());
  CHECK(res.exit_code == 0);
  const auto bary = bcm::read_pointcloud_csv((out / "barycenter.csv").string());
  const auto expected = bcm::read_pointcloud_csv(fx.query_path);
  CHECK((bary.points - expected.points).cwiseAbs().maxCoeff() < 1e-12);

  // Gaussian path: 1D references 1 and 9 at lambda = 1/2 give variance 4.
  const fs::path s1 = fx.dir / "s1.csv";
  const fs::path s2 = fx.dir / "s2.csv";
  bcm::write_spd_csv(s1.string(), bcm::SpdMatrix(Eigen::MatrixXd::Constant(1, 1, 1.0)));
  bcm::write_spd_csv(s2.string(), bcm::SpdMatrix(Eigen::MatrixXd::Constant(1, 1, 9.0)));
  write_config(config, "method = gaussian\nlambda = 0.5,0.5\nrefs = " + s1.string() + "," +
                           s2.string() + "\n");
  const auto gauss = run_cli("synthesize --config " + config.string() + " --out " + out.string());
  CHECK(gauss.exit_code == 0);
  CHECK(bcm::read_spd_csv((out / "barycenter.csv").string())(0, 0) ==
        doctest::Approx(4.0).epsilon(1e-8));

  // Grid path: two one-hot pixels meet in the middle column.
  Eigen::MatrixXd left = Eigen::MatrixXd::Zero(3, 9), right = Eigen::MatrixXd::Zero(3, 9);
  left(1, 0) = 1.0;
  right(1, 8) = 1.0;
  const fs::path g1 = fx.dir / "g1.csv";
  const fs::path g2 = fx.dir / "g2.csv";
  bcm::write_grid_csv(g1.string(), bcm::GridMeasure(left));
  bcm::write_grid_csv(g2.string(), bcm::GridMeasure(right));
  write_config(config, "method = grid\nlambda = 0.5,0.5\nrefs = " + g1.string() + "," +
                           g2.string() + "\nepsilon = 0.5\n");
  const auto grid = run_cli("synthesize --config " + config.string() + " --out " + out.string());
  CHECK(grid.exit_code == 0);
  const auto mass = bcm::read_grid_csv((out / "barycenter.csv").string());
  Eigen::Index r, c;
  mass.mass.maxCoeff(&r, &c);
  CHECK(c == 4);

  // Bad lambda is a config error (exit 2).
  write_config(config, "method = quantile\nlambda = 0.9,0.3\nrefs = " + join(fx.ref_paths) + "\n");
  CHECK(run_cli("synthesize --config " + config.string() + " --out " + out.string()).exit_code ==
        2);
}

TEST_CASE("cli: convergence sweeps and the exact short-circuit") {
  const fs::path out = fresh_dir("convergence_out");
  const fs::path config = out / "conv.conf";

  // n = 0 rejected.
  write_config(config, "family = sorted1d\nn_sweep = 0\nseeds = 2\n");
  CHECK(run_cli("convergence --config " + config.string() + " --out " + out.string()).exit_code ==
        2);

  // Exact estimator short-circuits to zero error.
  write_config(config, "family = gaussian\nestimator = exact\nd = 2\np = 2\nn_sweep = 50,100\n"
                       "seeds = 2\n");
  const auto exact = run_cli("convergence --config " + config.string() + " --out " + out.string() +
                             " --seed 4");
  CHECK(exact.exit_code == 0);
  {
    std::ifstream in(out / "convergence.csv");
    std::string line;
    bool saw_data = false;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#' || line[0] == 'n') continue;
      // n,epsilon,median_entry_err,median_lambda_err
      const auto last_comma = line.find(',', line.find(',') + 1);
      const double err = std::stod(line.substr(last_comma + 1));
      CHECK(err < 1e-10);
      saw_data = true;
    }
    CHECK(saw_data);
  }

  // Sampled monotone-map estimator improves with n.
  write_config(config, "family = sorted1d\np = 2\nn_sweep = 50,400\nseeds = 5\n");
  const auto sampled = run_cli("convergence --config " + config.string() + " --out " +
                               out.string() + " --seed 4");
  CHECK(sampled.exit_code == 0);
  std::vector<double> errs;
  {
    std::ifstream in(out / "convergence.csv");
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#' || line[0] == 'n') continue;
      std::istringstream fields(line);
      std::string field;
      std::getline(fields, field, ',');
      std::getline(fields, field, ',');
      std::getline(fields, field, ',');
      errs.push_back(std::stod(field));
    }
  }
  REQUIRE(errs.size() == 2);
  CHECK(errs[1] < errs[0]);
  check_metadata(out);
}

TEST_CASE("cli: inpaint on a small synthetic run emits grids and scores") {
  const fs::path out = fresh_dir("inpaint_out");
  const fs::path config = out / "inpaint.conf";
  write_config(config,
               "mode = occlude\np = 4\ntrials = 1\nepsilon = 10\nscore_epsilon = 1\n"
               "ibp_tol = 1e-6\nsinkhorn_tol = 1e-6\n");
  const auto res =
      run_cli("inpaint --config " + config.string() + " --out " + out.string() + " --seed 2");
  CHECK(res.exit_code == 0);
  CHECK(fs::exists(out / "scores.csv"));
  const auto corrupted = bcm::read_grid_csv((out / "corrupted_0.csv").string());
  // The occlusion block is empty in the corrupted grid.
  CHECK(corrupted.mass.block(10, 10, 8, 8).cwiseAbs().maxCoeff() == 0.0);
  const auto recon = bcm::read_grid_csv((out / "bcm_0.csv").string());
  CHECK(recon.mass.sum() == doctest::Approx(1.0).epsilon(1e-8));
  check_metadata(out);

  write_config(config, "mode = sideways\n");
  CHECK(run_cli("inpaint --config " + config.string() + " --out " + out.string()).exit_code == 2);
}

TEST_CASE("cli: classify on a compatible synthetic corpus") {
  const fs::path data = fresh_dir("classify_data");
  auto rng = bcm::make_stream(99);
  std::ofstream labels(data / "labels.csv");
  // Two topics of 1D clouds; barycentric members of each family.
  for (int topic = 0; topic < 2; ++topic) {
    const double center = topic == 0 ? 0.0 : 7.0;
    for (int i = 0; i < 5; ++i) {
      Eigen::MatrixXd pts =
          (bcm::sample_standard_normal(rng, 16, 1).array() + center + 0.3 * i).matrix();
      const std::string name = "doc_" + std::to_string(topic) + "_" + std::to_string(i) + ".csv";
      bcm::write_pointcloud_csv((data / name).string(), bcm::PointCloud::uniform(pts));
      labels << name << "," << (topic == 0 ? "alpha" : "beta") << "\n";
    }
  }
  labels.close();

  const fs::path out = fresh_dir("classify_out");
  const fs::path config = data / "classify.conf";
  write_config(config, "data_dir = " + data.string() + "\nlabels = " + (data / "labels.csv").string() +
                           "\nk_sweep = 1,2\nrepeats = 2\ntest_size = 4\nepsilon = 0.5\n");
  const auto res = run_cli("classify --config " + config.string() + " --out " + out.string() +
                           " --seed 6 --threads 2");
  CHECK(res.exit_code == 0);
  const std::string table = slurp(out / "accuracy.csv");
  CHECK(table.find("method,k,accuracy") != std::string::npos);
  for (const char* method : {"nn1", "min-avg-dist", "min-bary-loss", "max-coord"}) {
    CHECK(table.find(method) != std::string::npos);
  }
  check_metadata(out);

  // Well-separated topics should be easy for NN1 at k = 2.
  std::istringstream in(table);
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("nn1,2,", 0) == 0) {
      CHECK(std::stod(line.substr(6)) == doctest::Approx(1.0));
    }
  }

  // k larger than the topic size is a config error.
  write_config(config, "data_dir = " + data.string() + "\nlabels = " + (data / "labels.csv").string() +
                           "\nk_sweep = 9\nepsilon = 0.5\n");
  CHECK(run_cli("classify --config " + config.string() + " --out " + out.string()).exit_code == 2);
}

TEST_CASE("cli: reruns are bit-exact for every command") {
  const auto fx = make_quantile_fixture("determinism", 60);
  const fs::path config = fx.dir / "conf";

  const auto rerun = [&](const std::string& name, const std::string& body,
                         const std::string& extra_flags) {
    write_config(config, body);
    const fs::path out_a = fresh_dir("det_" + name + "_a");
    const fs::path out_b = fresh_dir("det_" + name + "_b");
    const auto first = run_cli(name + " --config " + config.string() + " --out " +
                               out_a.string() + " " + extra_flags);
    const auto second = run_cli(name + " --config " + config.string() + " --out " +
                                out_b.string() + " " + extra_flags);
    INFO(name, " first run: ", first.output);
    CHECK(first.exit_code == 0);
    CHECK(second.exit_code == 0);
    check_dirs_equal(out_a, out_b);
  };

  rerun("estimate-coords",
        "query = " + fx.query_path + "\nrefs = " + join(fx.ref_paths) + "\nmaps = exact1d\n",
        "--seed 9");
  rerun("covariance", "p = 2\nd = 2\ntrials = 2\nsample_sizes = 12,25\n", "--seed 9 --threads 2");
  rerun("synthesize", "method = quantile\nlambda = 0.25,0.5,0.25\nrefs = " + join(fx.ref_paths) +
                          "\n",
        "--seed 9");
  rerun("convergence", "family = sorted1d\np = 2\nn_sweep = 40,80\nseeds = 3\n",
        "--seed 9 --threads 2");
  rerun("inpaint",
        "mode = noise\nalpha = 0.4\np = 3\ntrials = 1\nepsilon = 10\nscore_epsilon = 1\n"
        "sinkhorn_tol = 1e-6\nibp_tol = 1e-6\n",
        "--seed 9");
}
