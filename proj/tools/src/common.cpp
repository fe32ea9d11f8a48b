#include "common.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "bcm/error.hpp"
#include "bcm/version.hpp"

namespace bcm::cli {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t");
  return s.substr(begin, end - begin + 1);
}

}  // namespace

RunConfig::RunConfig(const std::string& command, const std::string& config_path,
                     const std::map<std::string, std::string>& overrides)
    : command_(command) {
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) throw ConfigError("cannot open config file " + config_path);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      const std::string stripped = trim(line);
      if (stripped.empty() || stripped[0] == '#') continue;
      const auto eq = stripped.find('=');
      if (eq == std::string::npos) {
        throw ConfigError(config_path + ":" + std::to_string(lineno) +
                          ": expected 'key = value'");
      }
      const std::string key = trim(stripped.substr(0, eq));
      if (key.empty()) {
        throw ConfigError(config_path + ":" + std::to_string(lineno) + ": empty key");
      }
      values_[key] = trim(stripped.substr(eq + 1));
    }
  }
  for (const auto& [k, v] : overrides) values_[k] = v;
}

std::string RunConfig::raw(const std::string& key, const std::string& fallback) {
  accessed_.insert(key);
  const auto it = values_.find(key);
  const std::string value = it != values_.end() ? it->second : fallback;
  resolved_[key] = value;
  return value;
}

std::string RunConfig::get_string(const std::string& key, const std::string& fallback) {
  return raw(key, fallback);
}

std::string RunConfig::require_string(const std::string& key) {
  accessed_.insert(key);
  const auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("missing required config key '" + key + "'");
  resolved_[key] = it->second;
  return it->second;
}

int RunConfig::get_int(const std::string& key, int fallback) {
  const std::string v = raw(key, std::to_string(fallback));
  try {
    std::size_t pos = 0;
    const int out = std::stoi(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return out;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': expected an integer, got '" + v + "'");
  }
}

double RunConfig::get_double(const std::string& key, double fallback) {
  const std::string v = raw(key, format_double(fallback));
  try {
    std::size_t pos = 0;
    const double out = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return out;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': expected a number, got '" + v + "'");
  }
}

std::uint64_t RunConfig::get_seed() {
  const std::string v = raw("seed", "0");
  try {
    return std::stoull(v);
  } catch (const std::exception&) {
    throw ConfigError("config key 'seed': expected a nonnegative integer, got '" + v + "'");
  }
}

std::vector<int> RunConfig::get_int_list(const std::string& key,
                                         const std::vector<int>& fallback) {
  std::string def;
  for (std::size_t i = 0; i < fallback.size(); ++i) {
    if (i) def += ",";
    def += std::to_string(fallback[i]);
  }
  const std::string v = raw(key, def);
  std::vector<int> out;
  std::istringstream in(v);
  std::string field;
  while (std::getline(in, field, ',')) {
    field = trim(field);
    if (field.empty()) continue;
    try {
      out.push_back(std::stoi(field));
    } catch (const std::exception&) {
      throw ConfigError("config key '" + key + "': bad integer '" + field + "'");
    }
  }
  if (out.empty()) throw ConfigError("config key '" + key + "': empty list");
  return out;
}

std::vector<std::string> RunConfig::get_string_list(const std::string& key) {
  const std::string v = require_string(key);
  std::vector<std::string> out;
  std::istringstream in(v);
  std::string field;
  while (std::getline(in, field, ',')) {
    field = trim(field);
    if (!field.empty()) out.push_back(field);
  }
  if (out.empty()) throw ConfigError("config key '" + key + "': empty list");
  return out;
}

bool RunConfig::has(const std::string& key) const { return values_.count(key) > 0; }

void RunConfig::reject_unknown() const {
  for (const auto& [k, v] : values_) {
    if (!accessed_.count(k)) {
      throw ConfigError("unknown config key '" + k + "' for command " + command_);
    }
  }
}

Metadata RunConfig::metadata() const {
  Metadata meta;
  meta.set("tool", std::string("bcm ") + kVersion);
  meta.set("command", command_);
  for (const auto& [k, v] : resolved_) meta.set(k, v);
  return meta;
}

std::string ensure_out_dir(const std::string& out) {
  if (out.empty()) throw ConfigError("missing output directory (--out)");
  std::filesystem::create_directories(out);
  return out;
}

std::string join_path(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

void write_report(const std::string& path, const Metadata& meta,
                  const std::vector<std::string>& lines) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw ValidationError("cannot open " + path + " for writing");
  out << meta.to_block();
  for (const auto& line : lines) out << line << "\n";
}

int threads_from_config(RunConfig& config) {
  const int threads = config.get_int("threads", 1);
  if (threads < 1) throw ConfigError("threads must be at least 1");
  return threads;
}

}  // namespace bcm::cli
