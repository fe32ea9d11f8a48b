#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <numeric>
#include <random>
#include <sstream>

#include "bcm/classify.hpp"
#include "bcm/error.hpp"
#include "bcm/parallel.hpp"
#include "bcm/rng.hpp"
#include "commands.hpp"

namespace bcm::cli {

namespace {

struct Dataset {
  std::vector<LabeledCloud> docs;
  std::map<std::string, std::vector<int>> by_topic;
};

// Labels file: one "filename,topic" pair per line; clouds live in data_dir.
Dataset load_dataset(const std::string& data_dir, const std::string& labels_path) {
  std::ifstream in(labels_path);
  if (!in) throw ConfigError("cannot open labels file " + labels_path);
  Dataset ds;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw ConfigError(labels_path + ":" + std::to_string(lineno) +
                        ": expected 'filename,topic'");
    }
    const std::string file = line.substr(0, comma);
    const std::string topic = line.substr(comma + 1);
    const int index = static_cast<int>(ds.docs.size());
    ds.docs.push_back({read_pointcloud_csv(join_path(data_dir, file)), topic});
    ds.by_topic[topic].push_back(index);
  }
  if (ds.docs.empty()) throw ConfigError(labels_path + ": no documents listed");
  return ds;
}

}  // namespace

void cmd_classify(RunConfig& config) {
  const std::string data_dir = config.require_string("data_dir");
  const std::string labels_path = config.require_string("labels");
  const std::vector<int> k_sweep = config.get_int_list("k_sweep", {1, 2, 3});
  const int repeats = config.get_int("repeats", 10);
  const int test_size = config.get_int("test_size", 20);
  ClassifyOptions options;
  options.epsilon = config.get_double("epsilon", 1.0);
  options.sinkhorn.tol = config.get_double("sinkhorn_tol", 1e-7);
  options.sinkhorn.max_iters = config.get_int("sinkhorn_max_iters", 20000);
  options.sinkhorn.anneal_from = config.get_double("anneal_from", 0.0);
  const int threads = threads_from_config(config);
  const std::uint64_t seed = config.get_seed();

  std::vector<ClassifyMethod> methods;
  {
    const std::string spec =
        config.get_string("methods", "nn1,min-avg-dist,min-bary-loss,max-coord");
    std::istringstream in(spec);
    std::string name;
    while (std::getline(in, name, ',')) {
      if (!name.empty()) methods.push_back(classify_method_from_name(name));
    }
    if (methods.empty()) throw ConfigError("config key 'methods': empty list");
  }
  const std::string out = ensure_out_dir(config.get_string("out", ""));
  config.reject_unknown();

  if (repeats <= 0) throw ConfigError("repeats must be positive");
  if (test_size <= 0) throw ConfigError("test_size must be positive");
  const int k_max = *std::max_element(k_sweep.begin(), k_sweep.end());
  const int k_min = *std::min_element(k_sweep.begin(), k_sweep.end());
  if (k_min <= 0) throw ConfigError("k_sweep entries must be positive");

  const Dataset dataset = load_dataset(data_dir, labels_path);
  for (const auto& [topic, members] : dataset.by_topic) {
    if (static_cast<int>(members.size()) < k_max + 1) {
      throw ConfigError("topic '" + topic + "' has " + std::to_string(members.size()) +
                        " documents, need at least k_max + 1 = " + std::to_string(k_max + 1));
    }
  }

  // accuracy[(method, k)] summed over repeats.
  std::map<std::pair<std::string, int>, double> accuracy;
  for (int r = 0; r < repeats; ++r) {
    auto rng = make_stream(seed, static_cast<std::uint64_t>(r));

    // Reference pool: k_max shuffled documents per topic; smaller k reuse the
    // prefix so transport solves are shared across the sweep via the cache.
    std::vector<int> ref_pool;
    std::vector<bool> reserved(dataset.docs.size(), false);
    for (const auto& [topic, members] : dataset.by_topic) {
      std::vector<int> order = members;
      std::shuffle(order.begin(), order.end(), rng);
      for (int i = 0; i < k_max; ++i) {
        ref_pool.push_back(order[i]);
        reserved[order[i]] = true;
      }
    }
    std::vector<int> remaining;
    for (int i = 0; i < static_cast<int>(dataset.docs.size()); ++i) {
      if (!reserved[i]) remaining.push_back(i);
    }
    if (remaining.empty()) throw ConfigError("no documents left for the test set");
    std::shuffle(remaining.begin(), remaining.end(), rng);
    const int actual_test = std::min<int>(test_size, static_cast<int>(remaining.size()));
    const std::vector<int> test_set(remaining.begin(), remaining.begin() + actual_test);

    TransportCache cache;
    ClassifyOptions opts = options;
    opts.cache = &cache;
    for (const int k : k_sweep) {
      std::vector<LabeledCloud> refs;
      int offset = 0;
      for (const auto& [topic, members] : dataset.by_topic) {
        for (int i = 0; i < k; ++i) refs.push_back(dataset.docs[ref_pool[offset + i]]);
        offset += k_max;
      }
      for (const auto method : methods) {
        std::vector<int> hits(test_set.size(), 0);
        parallel_for(static_cast<int>(test_set.size()), threads, [&](int t) {
          const auto& doc = dataset.docs[test_set[t]];
          hits[t] = classify(doc.cloud, refs, method, opts) == doc.label ? 1 : 0;
        });
        const double correct = std::accumulate(hits.begin(), hits.end(), 0);
        accuracy[{classify_method_name(method), k}] += correct / test_set.size();
      }
    }
  }

  const std::string path = join_path(out, "accuracy.csv");
  std::ofstream file(path, std::ios::trunc);
  if (!file) throw ValidationError("cannot open " + path + " for writing");
  file << config.metadata().to_block();
  file << "method,k,accuracy\n";
  for (const auto& [key, total] : accuracy) {
    file << key.first << ',' << key.second << ',' << format_double(total / repeats) << '\n';
  }
  std::cout << "classify: wrote " << path << "\n";
}

}  // namespace bcm::cli
