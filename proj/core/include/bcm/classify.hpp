#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "bcm/entropic.hpp"
#include "bcm/point_cloud.hpp"
#include "bcm/qp.hpp"

namespace bcm {

struct LabeledCloud {
  PointCloud cloud;
  std::string label;
};

enum class ClassifyMethod { NN1, MinAvgDist, MinBaryLoss, MaxCoord };

ClassifyMethod classify_method_from_name(const std::string& name);
std::string classify_method_name(ClassifyMethod method);

/// Memo of per-(query, reference, epsilon) transport solves so repeated
/// predictions against overlapping reference sets reuse plan costs and
/// transport estimates. Safe for concurrent insertion.
class TransportCache {
 public:
  struct Entry {
    double plan_cost;            // <pi, M>, the W2^2 surrogate
    Eigen::MatrixXd projection;  // barycentric projection of the plan
  };

  const Entry& solve(const PointCloud& query, std::uint64_t query_hash, const PointCloud& ref,
                     std::uint64_t ref_hash, double epsilon, const SinkhornOptions& opts);

  std::size_t size() const;

 private:
  mutable std::mutex mu_;
  std::map<std::tuple<std::uint64_t, std::uint64_t, double>, Entry> entries_;
};

/// Content hash of a cloud (weights and coordinates, bitwise).
std::uint64_t cloud_hash(const PointCloud& cloud);

struct ClassifyOptions {
  double epsilon = 1.0;
  SinkhornOptions sinkhorn{};  // half_cost is forced off: costs are ||x-y||^2
  QpOptions qp{};
  int threads = 1;
  TransportCache* cache = nullptr;  // optional shared memo
};

struct ClassifyResult {
  std::string label;
  // Per-label decision values: plan costs (NN1, MinAvgDist), quadratic losses
  // (MinBaryLoss) or coordinate masses (MaxCoord, summing to 1).
  std::map<std::string, double> scores;
};

/// Topic prediction over labeled reference measures. Ties break toward the
/// smallest label. Deterministic given inputs and epsilon.
ClassifyResult classify_with_scores(const PointCloud& query,
                                    const std::vector<LabeledCloud>& refs, ClassifyMethod method,
                                    const ClassifyOptions& opts);

std::string classify(const PointCloud& query, const std::vector<LabeledCloud>& refs,
                     ClassifyMethod method, const ClassifyOptions& opts);

}  // namespace bcm
