#pragma once

#include <atomic>
#include <chrono>
#include <fstream>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "ttb/model/gateway.hpp"
#include "ttb/run/config.hpp"
#include "ttb/run/records.hpp"
#include "ttb/tasks/evaluators.hpp"
#include "ttb/tasks/generators.hpp"
#include "ttb/util/rng.hpp"

namespace ttb {

struct RunOutcome {
  int records_written = 0;
  int failures = 0;  // trials that carry an error annotation
};

namespace run_detail {

inline std::string fresh_run_id(std::uint64_t master_seed) {
  auto now = static_cast<std::uint64_t>(
      std::chrono::system_clock::now().time_since_epoch().count());
  return hex_u64(fnv1a64_u64(master_seed, now));
}

}  // namespace run_detail

/// Executes the whole campaign: every selected task, at every applicable
/// size, against every model, for the configured number of repetitions.
/// Each trial is appended to the JSONL output and flushed as soon as it
/// finishes, so an interrupted run keeps everything already completed.
/// Trials are derived deterministically from the master seed; model failures
/// are recorded (scored against an empty response) rather than aborting.
///
/// Models run in parallel lanes; within a lane at most per_model_concurrency
/// trials are in flight. With one model and the default cap of 1, records
/// appear in plan order (task, size, iteration); otherwise the order follows
/// completion, which only matters for reading, never for summarizing.
inline RunOutcome run_benchmark(const RunConfig& cfg, const TaskAssets& assets = default_assets()) {
  validate_run_config(cfg);
  std::ofstream out(cfg.output_path, std::ios::app);
  if (!out) throw std::invalid_argument("cannot open output file " + cfg.output_path);

  struct Trial {
    TaskId task;
    std::optional<long long> size;
    int iteration;
  };
  std::vector<Trial> plan;
  for (TaskId task : cfg.tasks) {
    std::vector<std::optional<long long>> sizes;
    if (is_scalable(task)) {
      for (long long b : cfg.byte_limits) sizes.emplace_back(b);
    } else {
      sizes.emplace_back(std::nullopt);
    }
    for (const auto& size : sizes) {
      for (int iteration = 1; iteration <= cfg.repetitions; ++iteration) {
        plan.push_back({task, size, iteration});
      }
    }
  }

  RunOutcome outcome;
  std::string run_id = run_detail::fresh_run_id(cfg.master_seed);
  std::mutex appender;  // serializes the output stream and the counters

  auto run_one = [&](const ModelConfig& model, const Trial& trial) {
    ResultRecord rec;
    rec.run_id = run_id;
    rec.task = trial.task;
    rec.model_id = model.id;
    rec.byte_limit = trial.size;
    rec.iteration = trial.iteration;
    rec.seed = derive_seed(cfg.master_seed, to_string(trial.task), trial.size.value_or(0),
                           trial.iteration);
    rec.model_config = sanitized_config_json(model);
    rec.started_at = now_iso8601_utc();

    std::optional<TaskInstance> instance;
    try {
      instance = generate_task(trial.task, trial.size, rec.seed, assets);
    } catch (const std::exception& e) {
      rec.error = std::string("task generation failed: ") + e.what();
    }
    if (instance) {
      rec.prompt = instance->prompt;
      rec.n_persons = instance->n_persons;
      TrialContext ctx{trial.task, trial.size, trial.iteration, rec.seed, &*instance};
      try {
        ModelAnswer ans = complete(model, instance->prompt, &ctx);
        rec.response = ans.text;
        rec.latency_s = ans.latency_s;
        rec.truncated = ans.truncated;
      } catch (const std::exception& e) {
        rec.error = e.what();
      }
      rec.metrics = evaluate(*instance, rec.response);
    }
    rec.finished_at = now_iso8601_utc();

    std::string line = record_to_jsonl_line(rec);
    std::lock_guard<std::mutex> lock(appender);
    if (!rec.error.empty()) ++outcome.failures;
    out << line << '\n';
    out.flush();
    ++outcome.records_written;
  };

  auto model_lane = [&](const ModelConfig& model) {
    int workers = static_cast<int>(
        std::min<std::size_t>(static_cast<std::size_t>(cfg.per_model_concurrency), plan.size()));
    if (workers <= 1) {
      for (const Trial& trial : plan) run_one(model, trial);
      return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < plan.size(); i = next.fetch_add(1)) {
          run_one(model, plan[i]);
        }
      });
    }
    for (auto& th : pool) th.join();
  };

  if (cfg.models.size() == 1) {
    model_lane(cfg.models.front());
  } else {
    std::vector<std::thread> lanes;
    lanes.reserve(cfg.models.size());
    for (const ModelConfig& model : cfg.models) {
      lanes.emplace_back([&, m = &model] { model_lane(*m); });
    }
    for (auto& th : lanes) th.join();
  }
  return outcome;
}

/// Re-scores previously collected responses without touching any model.
/// Input entries need task, seed, and response (byte_limit where the task is
/// scalable); the task instance is regenerated from those coordinates, so
/// metrics land on exactly the prompt the response was collected against.
/// Entries that cannot be scored become records with an error annotation.
inline RunOutcome evaluate_offline(const std::string& input_path, const std::string& output_path,
                                   const TaskAssets& assets = default_assets()) {
  std::ifstream in(input_path);
  if (!in) throw std::invalid_argument("cannot open input file " + input_path);
  std::ofstream out(output_path, std::ios::app);
  if (!out) throw std::invalid_argument("cannot open output file " + output_path);

  RunOutcome outcome;
  std::string run_id = run_detail::fresh_run_id(fnv1a64("offline"));
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_blank(line)) continue;
    ResultRecord rec;
    rec.run_id = run_id;
    rec.started_at = now_iso8601_utc();
    try {
      nlohmann::json j = nlohmann::json::parse(line);
      if (!j.is_object()) throw std::invalid_argument("entry is not a JSON object");
      std::string task_name = j.value("task", std::string());
      auto task = task_from_string(task_name);
      if (!task) throw std::invalid_argument("unknown task id '" + task_name + "'");
      rec.task = *task;
      if (j.contains("byte_limit") && !j["byte_limit"].is_null()) {
        rec.byte_limit = j["byte_limit"].get<long long>();
      }
      if (!j.contains("seed")) throw std::invalid_argument("entry has no seed");
      rec.seed = j["seed"].get<std::uint64_t>();
      if (!j.contains("response")) throw std::invalid_argument("entry has no response");
      rec.response = j["response"].get<std::string>();
      rec.model_id = j.value("model", std::string("offline"));
      rec.iteration = j.value("iteration", 1);
      rec.truncated = j.value("truncated", false);

      TaskInstance instance = generate_task(rec.task, rec.byte_limit, rec.seed, assets);
      rec.prompt = instance.prompt;
      rec.n_persons = instance.n_persons;
      rec.metrics = evaluate(instance, rec.response);
    } catch (const std::exception& e) {
      rec.error = input_path + ":" + std::to_string(line_no) + ": " + e.what();
      ++outcome.failures;
    }
    rec.finished_at = now_iso8601_utc();
    out << record_to_jsonl_line(rec) << '\n';
    out.flush();
    ++outcome.records_written;
  }
  return outcome;
}

}  // namespace ttb
