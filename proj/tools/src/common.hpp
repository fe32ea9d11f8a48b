#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "bcm/csv_io.hpp"

namespace bcm::cli {

/// Resolved run parameters: flat key-value config file plus command-line
/// overrides. Every lookup records the resolved value so the metadata block
/// echoes exactly what the run used; keys present in the file but never read
/// by the command are rejected as typos.
class RunConfig {
 public:
  RunConfig(const std::string& command, const std::string& config_path,
            const std::map<std::string, std::string>& overrides);

  std::string get_string(const std::string& key, const std::string& fallback);
  std::string require_string(const std::string& key);
  int get_int(const std::string& key, int fallback);
  double get_double(const std::string& key, double fallback);
  std::uint64_t get_seed();
  std::vector<int> get_int_list(const std::string& key, const std::vector<int>& fallback);
  std::vector<std::string> get_string_list(const std::string& key);
  bool has(const std::string& key) const;

  /// Throws ConfigError when the config carries keys the command never read.
  void reject_unknown() const;

  /// Metadata block echoing the command, library version and every resolved
  /// parameter, in sorted key order.
  Metadata metadata() const;

  const std::string& command() const { return command_; }

 private:
  std::string raw(const std::string& key, const std::string& fallback);

  std::string command_;
  std::map<std::string, std::string> values_;
  std::map<std::string, std::string> resolved_;
  std::set<std::string> accessed_;
};

/// Creates the output directory (parents included) and returns it.
std::string ensure_out_dir(const std::string& out);

std::string join_path(const std::string& dir, const std::string& name);

/// Writes a plain-text report: metadata block, then the given lines.
void write_report(const std::string& path, const Metadata& meta,
                  const std::vector<std::string>& lines);

int threads_from_config(RunConfig& config);

}  // namespace bcm::cli
