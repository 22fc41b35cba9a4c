#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"

#include "ttb/model/config.hpp"
#include "ttb/tasks/task.hpp"

namespace ttb {

/// A benchmark campaign: which tasks, at which sizes, against which models,
/// how many repetitions, and where the records go.
struct RunConfig {
  std::vector<TaskId> tasks;
  std::vector<long long> byte_limits;  // applied to scalable tasks only
  int repetitions = 1;
  std::uint64_t master_seed = 0;
  std::string output_path = "results.jsonl";
  int per_model_concurrency = 1;
  std::vector<ModelConfig> models;
};

inline void validate_run_config(const RunConfig& cfg) {
  if (cfg.tasks.empty()) throw std::invalid_argument("run config: tasks must be non-empty");
  if (cfg.repetitions < 1) throw std::invalid_argument("run config: repetitions must be >= 1");
  if (cfg.per_model_concurrency < 1) {
    throw std::invalid_argument("run config: per_model_concurrency must be >= 1");
  }
  if (cfg.output_path.empty()) throw std::invalid_argument("run config: output_path is required");
  if (cfg.models.empty()) throw std::invalid_argument("run config: at least one model is required");
  bool any_scalable = std::any_of(cfg.tasks.begin(), cfg.tasks.end(), is_scalable);
  if (any_scalable && cfg.byte_limits.empty()) {
    throw std::invalid_argument("run config: byte_limits must be non-empty when a scalable task is selected");
  }
  std::set<long long> seen;
  for (long long b : cfg.byte_limits) {
    if (b < 1000) {
      throw std::invalid_argument("run config: byte limit " + std::to_string(b) +
                                  " is below the minimum of 1000");
    }
    if (!seen.insert(b).second) {
      throw std::invalid_argument("run config: duplicate byte limit " + std::to_string(b));
    }
  }
  std::set<std::string> ids;
  for (const auto& m : cfg.models) {
    validate_model_config(m);
    if (!ids.insert(m.id).second) {
      throw std::invalid_argument("run config: duplicate model id '" + m.id + "'");
    }
  }
}

namespace run_config_detail {

inline std::string dirname_of(const std::string& path) {
  auto pos = path.find_last_of('/');
  if (pos == std::string::npos) return ".";
  if (pos == 0) return "/";
  return path.substr(0, pos);
}

inline std::string resolve_sibling(const std::string& config_path, const std::string& target) {
  if (target.empty() || target.front() == '/') return target;
  return dirname_of(config_path) + "/" + target;
}

}  // namespace run_config_detail

/// Parses a run config JSON file. Models come either inline under "models"
/// or from a roster file referenced by "roster" (resolved relative to the
/// config file's directory).
inline RunConfig load_run_config(const std::string& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_text_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("run config " + path + ": invalid JSON: " + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("run config " + path + ": expected a JSON object");

  RunConfig cfg;
  if (!j.contains("tasks") || !j["tasks"].is_array()) {
    throw std::invalid_argument("run config " + path + ": \"tasks\" array is required");
  }
  for (const auto& t : j["tasks"]) {
    std::string name = t.get<std::string>();
    auto id = task_from_string(name);
    if (!id) throw std::invalid_argument("run config " + path + ": unknown task '" + name + "'");
    cfg.tasks.push_back(*id);
  }
  if (j.contains("byte_limits")) {
    for (const auto& b : j["byte_limits"]) cfg.byte_limits.push_back(b.get<long long>());
  }
  cfg.repetitions = j.value("repetitions", 1);
  cfg.master_seed = j.value("master_seed", std::uint64_t{0});
  cfg.output_path = j.value("output_path", std::string("results.jsonl"));
  cfg.per_model_concurrency = j.value("per_model_concurrency", 1);

  if (j.contains("models")) {
    for (std::size_t i = 0; i < j["models"].size(); ++i) {
      try {
        cfg.models.push_back(model_config_from_json(j["models"][i]));
      } catch (const std::exception& e) {
        throw std::invalid_argument("run config " + path + ": models[" + std::to_string(i) +
                                    "]: " + e.what());
      }
    }
  }
  if (j.contains("roster")) {
    std::string roster =
        run_config_detail::resolve_sibling(path, j["roster"].get<std::string>());
    for (auto& m : load_model_roster(roster)) cfg.models.push_back(std::move(m));
  }
  validate_run_config(cfg);
  return cfg;
}

}  // namespace ttb
