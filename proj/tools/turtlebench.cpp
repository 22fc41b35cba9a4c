// Command-line front end: run campaigns, summarize results, re-score
// recorded responses offline, and render individual prompts.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "ttb/run/runner.hpp"
#include "ttb/run/summary.hpp"
#include "ttb/tasks/generators.hpp"

namespace {

int cmd_run(const std::string& config_path) {
  ttb::RunConfig cfg = ttb::load_run_config(config_path);
  ttb::RunOutcome outcome = ttb::run_benchmark(cfg);
  std::cerr << "wrote " << outcome.records_written << " record(s) to " << cfg.output_path;
  if (outcome.failures > 0) std::cerr << ", " << outcome.failures << " with error annotations";
  std::cerr << "\n";
  return outcome.failures > 0 ? 2 : 0;
}

int cmd_summarize(const std::string& input, const std::string& metric, const std::string& csv) {
  auto records = ttb::read_result_records(input);
  std::optional<std::string> wanted;
  if (!metric.empty()) wanted = metric;
  auto rows = ttb::summarize_records(records, wanted);
  if (csv == "-") {
    std::cout << ttb::summary_to_csv(rows);
    return 0;
  }
  std::cout << ttb::summary_to_table(rows);
  if (!csv.empty()) {
    std::ofstream f(csv);
    if (!f) throw std::invalid_argument("cannot open CSV output " + csv);
    f << ttb::summary_to_csv(rows);
    std::cerr << "wrote CSV to " << csv << "\n";
  }
  return 0;
}

int cmd_evaluate_offline(const std::string& input, const std::string& output) {
  std::string out_path = output.empty() ? input + ".scored.jsonl" : output;
  ttb::RunOutcome outcome = ttb::evaluate_offline(input, out_path);
  std::cerr << "wrote " << outcome.records_written << " record(s) to " << out_path;
  if (outcome.failures > 0) std::cerr << ", " << outcome.failures << " with error annotations";
  std::cerr << "\n";
  return outcome.failures > 0 ? 2 : 0;
}

int cmd_render_task(const std::string& task_name, std::optional<long long> byte_limit,
                    std::uint64_t seed) {
  auto task = ttb::task_from_string(task_name);
  if (!task) throw std::invalid_argument("unknown task '" + task_name + "'");
  ttb::TaskInstance inst = ttb::generate_task(*task, byte_limit, seed);
  std::cout << inst.prompt;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"turtlebench: benchmark harness for RDF/Turtle proficiency tasks"};
  app.require_subcommand(1);

  std::string run_config;
  auto* run_cmd = app.add_subcommand("run", "Execute a benchmark campaign");
  run_cmd->add_option("--config", run_config, "Run configuration JSON file")->required();

  std::string sum_input, sum_metric, sum_csv;
  auto* sum_cmd = app.add_subcommand("summarize", "Summarize a JSONL results file");
  sum_cmd->add_option("--input", sum_input, "JSONL results file")->required();
  sum_cmd->add_option("--metric", sum_metric, "Restrict the summary to one metric");
  sum_cmd->add_option("--csv", sum_csv, "Write the CSV summary to this file ('-' for stdout)");

  std::string off_input, off_output;
  auto* off_cmd =
      app.add_subcommand("evaluate-offline", "Re-score recorded responses without model calls");
  off_cmd->add_option("--input", off_input, "JSONL file with task, seed, and response fields")
      ->required();
  off_cmd->add_option("--output", off_output, "Where to write scored records");

  std::string task_name;
  long long byte_limit = 0;
  std::uint64_t seed = 0;
  auto* render_cmd = app.add_subcommand("render-task", "Print one generated prompt");
  render_cmd->add_option("--task", task_name, "Task id (T1..T5)")->required();
  auto* limit_opt = render_cmd->add_option("--byte-limit", byte_limit,
                                           "Byte limit for scalable tasks (T3, T4)");
  render_cmd->add_option("--seed", seed, "Trial seed (default 0)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (run_cmd->parsed()) return cmd_run(run_config);
    if (sum_cmd->parsed()) return cmd_summarize(sum_input, sum_metric, sum_csv);
    if (off_cmd->parsed()) return cmd_evaluate_offline(off_input, off_output);
    if (render_cmd->parsed()) {
      std::optional<long long> limit;
      if (limit_opt->count() > 0) limit = byte_limit;
      return cmd_render_task(task_name, limit, seed);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
