#pragma once

#include <cstdint>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "ttb/tasks/task.hpp"
#include "ttb/util/strings.hpp"

namespace ttb {

/// One benchmark trial, exactly as persisted to the JSONL results file.
/// `error` is empty on success; failed trials keep their metrics (scored
/// against an empty response) so summaries do not silently drop them.
struct ResultRecord {
  std::string run_id;
  TaskId task = TaskId::T1;
  std::string model_id;
  std::optional<long long> byte_limit;
  std::optional<int> n_persons;
  int iteration = 1;
  std::uint64_t seed = 0;
  std::string prompt;
  std::string response;
  MetricSet metrics;
  double latency_s = 0.0;
  std::string started_at;
  std::string finished_at;
  bool truncated = false;
  std::string error;
  nlohmann::json model_config = nlohmann::json::object();
};

inline nlohmann::json record_to_json(const ResultRecord& r) {
  nlohmann::json j;
  j["run_id"] = r.run_id;
  j["task"] = to_string(r.task);
  j["model"] = r.model_id;
  j["byte_limit"] = r.byte_limit ? nlohmann::json(*r.byte_limit) : nlohmann::json(nullptr);
  j["n_persons"] = r.n_persons ? nlohmann::json(*r.n_persons) : nlohmann::json(nullptr);
  j["iteration"] = r.iteration;
  j["seed"] = r.seed;
  j["prompt"] = r.prompt;
  j["response"] = r.response;
  nlohmann::json metrics = nlohmann::json::object();
  for (const auto& [name, value] : r.metrics) metrics[name] = value;
  j["metrics"] = metrics;
  j["latency_s"] = r.latency_s;
  j["started_at"] = r.started_at;
  j["finished_at"] = r.finished_at;
  j["truncated"] = r.truncated;
  j["error"] = r.error;
  j["model_config"] = r.model_config;
  return j;
}

/// One output line. Model responses come from the wild and may not be valid
/// UTF-8; broken sequences are replaced (U+FFFD) rather than aborting a run.
/// Scoring always happens on the raw bytes, before this replacement.
inline std::string record_to_jsonl_line(const ResultRecord& r) {
  return record_to_json(r).dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
}

inline ResultRecord record_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("result record must be a JSON object");
  ResultRecord r;
  r.run_id = j.value("run_id", std::string());
  std::string task = j.value("task", std::string());
  auto id = task_from_string(task);
  if (!id) throw std::invalid_argument("result record has unknown task id '" + task + "'");
  r.task = *id;
  r.model_id = j.value("model", std::string());
  if (j.contains("byte_limit") && !j["byte_limit"].is_null()) {
    r.byte_limit = j["byte_limit"].get<long long>();
  }
  if (j.contains("n_persons") && !j["n_persons"].is_null()) {
    r.n_persons = j["n_persons"].get<int>();
  }
  r.iteration = j.value("iteration", 1);
  r.seed = j.value("seed", std::uint64_t{0});
  r.prompt = j.value("prompt", std::string());
  r.response = j.value("response", std::string());
  if (j.contains("metrics")) {
    for (const auto& [name, value] : j["metrics"].items()) {
      r.metrics[name] = value.get<double>();
    }
  }
  r.latency_s = j.value("latency_s", 0.0);
  r.started_at = j.value("started_at", std::string());
  r.finished_at = j.value("finished_at", std::string());
  r.truncated = j.value("truncated", false);
  r.error = j.value("error", std::string());
  if (j.contains("model_config")) r.model_config = j["model_config"];
  return r;
}

/// Reads a JSONL results file. Blank lines are ignored; anything else that is
/// not a valid record is an error (reported with its 1-based line number).
inline std::vector<ResultRecord> read_result_records(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open results file " + path);
  std::vector<ResultRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_blank(line)) continue;
    try {
      out.push_back(record_from_json(nlohmann::json::parse(line)));
    } catch (const std::exception& e) {
      throw std::invalid_argument(path + ":" + std::to_string(line_no) + ": bad record: " +
                                  e.what());
    }
  }
  return out;
}

}  // namespace ttb
