#include "bcm/classify.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <tuple>

#include "bcm/error.hpp"
#include "bcm/gram.hpp"
#include "bcm/parallel.hpp"

namespace bcm {

ClassifyMethod classify_method_from_name(const std::string& name) {
  if (name == "nn1") return ClassifyMethod::NN1;
  if (name == "min-avg-dist") return ClassifyMethod::MinAvgDist;
  if (name == "min-bary-loss") return ClassifyMethod::MinBaryLoss;
  if (name == "max-coord") return ClassifyMethod::MaxCoord;
  throw ConfigError("unknown classify method '" + name +
                    "' (expected nn1, min-avg-dist, min-bary-loss or max-coord)");
}

std::string classify_method_name(ClassifyMethod method) {
  switch (method) {
    case ClassifyMethod::NN1: return "nn1";
    case ClassifyMethod::MinAvgDist: return "min-avg-dist";
    case ClassifyMethod::MinBaryLoss: return "min-bary-loss";
    case ClassifyMethod::MaxCoord: return "max-coord";
  }
  return "?";
}

std::uint64_t cloud_hash(const PointCloud& cloud) {
  // FNV-1a over the raw bytes of weights then coordinates.
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](const double* data, std::size_t count) {
    const auto* bytes = reinterpret_cast<const std::uint8_t*>(data);
    for (std::size_t i = 0; i < count * sizeof(double); ++i) {
      h ^= bytes[i];
      h *= 1099511628211ULL;
    }
  };
  mix(cloud.weights.data(), static_cast<std::size_t>(cloud.weights.size()));
  mix(cloud.points.data(), static_cast<std::size_t>(cloud.points.size()));
  return h;
}

const TransportCache::Entry& TransportCache::solve(const PointCloud& query,
                                                   std::uint64_t query_hash,
                                                   const PointCloud& ref, std::uint64_t ref_hash,
                                                   double epsilon, const SinkhornOptions& opts) {
  const auto key = std::make_tuple(query_hash, ref_hash, epsilon);
  {
    std::lock_guard<std::mutex> lock(mu_);
    const auto it = entries_.find(key);
    if (it != entries_.end()) return it->second;
  }
  const Eigen::MatrixXd cost = squared_cost_matrix(query, ref, opts.half_cost);
  const SinkhornResult sk = sinkhorn(query, ref, epsilon, opts);
  Entry fresh{entropic_cost(sk.plan, cost),
              barycentric_projection(sk.plan, query.weights, ref)};
  std::lock_guard<std::mutex> lock(mu_);
  return entries_.emplace(key, std::move(fresh)).first->second;
}

std::size_t TransportCache::size() const {
  std::lock_guard<std::mutex> lock(mu_);
  return entries_.size();
}

namespace {

struct Solved {
  double cost;
  Eigen::MatrixXd projection;
};

// Transport from the query to every reference, through the cache when one is
// supplied. Reference order is preserved.
std::vector<Solved> solve_all(const PointCloud& query, const std::vector<LabeledCloud>& refs,
                              const ClassifyOptions& opts) {
  SinkhornOptions sk = opts.sinkhorn;
  sk.half_cost = false;
  const std::uint64_t qh = opts.cache ? cloud_hash(query) : 0;
  std::vector<Solved> out(refs.size());
  parallel_for(static_cast<int>(refs.size()), opts.threads, [&](int i) {
    if (opts.cache) {
      const auto& e = opts.cache->solve(query, qh, refs[i].cloud, cloud_hash(refs[i].cloud),
                                        opts.epsilon, sk);
      out[i] = Solved{e.plan_cost, e.projection};
    } else {
      const Eigen::MatrixXd cost = squared_cost_matrix(query, refs[i].cloud, false);
      const SinkhornResult r = sinkhorn(query, refs[i].cloud, opts.epsilon, sk);
      out[i] = Solved{entropic_cost(r.plan, cost),
                      barycentric_projection(r.plan, query.weights, refs[i].cloud)};
    }
  });
  return out;
}

std::string argbest(const std::map<std::string, double>& scores, bool minimize) {
  std::string best_label;
  double best = minimize ? std::numeric_limits<double>::infinity()
                         : -std::numeric_limits<double>::infinity();
  for (const auto& [label, score] : scores) {  // ordered: ties keep the smallest label
    if ((minimize && score < best) || (!minimize && score > best)) {
      best = score;
      best_label = label;
    }
  }
  return best_label;
}

}  // namespace

ClassifyResult classify_with_scores(const PointCloud& query,
                                    const std::vector<LabeledCloud>& refs, ClassifyMethod method,
                                    const ClassifyOptions& opts) {
  if (refs.empty()) throw ValidationError("classify: empty reference set");

  std::map<std::string, std::vector<int>> by_label;
  for (int i = 0; i < static_cast<int>(refs.size()); ++i) {
    by_label[refs[i].label].push_back(i);
  }

  ClassifyResult result;
  switch (method) {
    case ClassifyMethod::NN1: {
      const auto solved = solve_all(query, refs, opts);
      for (const auto& [label, idx] : by_label) {
        double best = std::numeric_limits<double>::infinity();
        for (const int i : idx) best = std::min(best, solved[i].cost);
        result.scores[label] = best;
      }
      result.label = argbest(result.scores, true);
      return result;
    }
    case ClassifyMethod::MinAvgDist: {
      const auto solved = solve_all(query, refs, opts);
      for (const auto& [label, idx] : by_label) {
        double total = 0.0;
        for (const int i : idx) total += solved[i].cost;
        result.scores[label] = total / static_cast<double>(idx.size());
      }
      result.label = argbest(result.scores, true);
      return result;
    }
    case ClassifyMethod::MinBaryLoss: {
      const auto solved = solve_all(query, refs, opts);
      for (const auto& [label, idx] : by_label) {
        std::vector<Eigen::MatrixXd> maps;
        maps.reserve(idx.size());
        for (const int i : idx) maps.push_back(solved[i].projection);
        const GramMatrix gram = gram_from_displacements(query.points, query.weights, maps);
        result.scores[label] = solve_simplex_qp(gram, std::nullopt, opts.qp).value;
      }
      result.label = argbest(result.scores, true);
      return result;
    }
    case ClassifyMethod::MaxCoord: {
      const auto solved = solve_all(query, refs, opts);
      std::vector<Eigen::MatrixXd> maps;
      maps.reserve(refs.size());
      for (const auto& s : solved) maps.push_back(s.projection);
      const GramMatrix gram = gram_from_displacements(query.points, query.weights, maps);
      const QpSolution sol = solve_simplex_qp(gram, std::nullopt, opts.qp);
      for (const auto& [label, idx] : by_label) {
        double mass = 0.0;
        for (const int i : idx) mass += sol.lambda(i);
        result.scores[label] = mass;
      }
      result.label = argbest(result.scores, false);
      return result;
    }
  }
  throw ValidationError("classify: unknown method");
}

std::string classify(const PointCloud& query, const std::vector<LabeledCloud>& refs,
                     ClassifyMethod method, const ClassifyOptions& opts) {
  return classify_with_scores(query, refs, method, opts).label;
}

}  // namespace bcm
