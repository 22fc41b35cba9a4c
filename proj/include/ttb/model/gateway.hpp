#pragma once

#include <cerrno>
#include <chrono>
#include <csignal>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <fcntl.h>
#include <poll.h>
#include <sys/wait.h>
#include <unistd.h>

#include "httplib.h"
#include "json.hpp"

#include "ttb/model/config.hpp"
#include "ttb/tasks/generators.hpp"
#include "ttb/util/rng.hpp"
#include "ttb/util/strings.hpp"

namespace ttb {

/// Raised for non-recoverable gateway failures: bad configuration, missing
/// credentials, protocol violations, or transient errors that survived every
/// retry. The text of a response is never inspected here; content-level
/// failures are the evaluators' business.
class GatewayError : public std::runtime_error {
 public:
  enum class Kind { Config, Auth, Protocol, RetriesExhausted };

  GatewayError(Kind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

namespace gateway_detail {

inline double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

inline std::string extra_or(const ModelConfig& c, const std::string& key,
                            const std::string& fallback) {
  auto it = c.extra_params.find(key);
  return it == c.extra_params.end() ? fallback : it->second;
}

// ---- mock -----------------------------------------------------------------

inline ModelAnswer mock_complete(const ModelConfig& config, const std::string& prompt,
                                 const TrialContext* ctx) {
  auto start = std::chrono::steady_clock::now();
  std::string behavior = extra_or(config, "behavior", "echo");
  ModelAnswer ans;
  ans.provider_metadata["backend"] = "mock";
  ans.provider_metadata["behavior"] = behavior;
  if (behavior == "echo") {
    ans.text = prompt;
  } else if (behavior == "fixed") {
    auto it = config.extra_params.find("text");
    if (it == config.extra_params.end()) {
      throw GatewayError(GatewayError::Kind::Config,
                         "mock model '" + config.id + "': behavior=fixed requires extra_params.text");
    }
    ans.text = it->second;
  } else if (behavior == "ideal") {
    if (ctx == nullptr || ctx->instance == nullptr) {
      throw GatewayError(GatewayError::Kind::Config,
                         "mock model '" + config.id +
                             "': behavior=ideal requires a trial context with the task instance");
    }
    ans.text = ideal_answer(*ctx->instance);
  } else if (behavior == "canned") {
    std::string key = "canned:" + hex_u64(fnv1a64(prompt));
    auto it = config.extra_params.find(key);
    if (it == config.extra_params.end()) {
      throw GatewayError(GatewayError::Kind::Protocol,
                         "mock model '" + config.id + "': no canned response under key '" + key + "'");
    }
    ans.text = it->second;
  } else {
    throw GatewayError(GatewayError::Kind::Config,
                       "mock model '" + config.id + "': unknown behavior '" + behavior + "'");
  }
  ans.latency_s = seconds_since(start);
  return ans;
}

// ---- replay ----------------------------------------------------------------

inline ModelAnswer replay_complete(const ModelConfig& config, const TrialContext* ctx) {
  auto start = std::chrono::steady_clock::now();
  auto path_it = config.extra_params.find("input");
  if (path_it == config.extra_params.end()) {
    throw GatewayError(GatewayError::Kind::Config,
                       "replay model '" + config.id + "': extra_params.input (results file) is required");
  }
  if (ctx == nullptr) {
    throw GatewayError(GatewayError::Kind::Config,
                       "replay model '" + config.id + "': a trial context is required");
  }
  std::string source_model = extra_or(config, "source_model", "");

  std::ifstream in(path_it->second);
  if (!in) {
    throw GatewayError(GatewayError::Kind::Config,
                       "replay model '" + config.id + "': cannot open " + path_it->second);
  }
  std::string want_task = to_string(ctx->task);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_blank(line)) continue;
    nlohmann::json rec;
    try {
      rec = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception&) {
      continue;  // foreign lines are skipped, not fatal
    }
    // Task ids in hand-written files may be lowercase; match by identity.
    auto rec_task = task_from_string(rec.value("task", std::string()));
    if (!rec_task || *rec_task != ctx->task) continue;
    std::optional<long long> rec_limit;
    if (rec.contains("byte_limit") && !rec["byte_limit"].is_null()) {
      rec_limit = rec["byte_limit"].get<long long>();
    }
    if (rec_limit != ctx->byte_limit) continue;
    if (rec.value("iteration", 0) != ctx->iteration) continue;
    if (!source_model.empty() && rec.value("model", std::string()) != source_model) continue;
    if (!rec.contains("response")) continue;
    ModelAnswer ans;
    ans.text = rec["response"].get<std::string>();
    ans.truncated = rec.value("truncated", false);
    ans.latency_s = seconds_since(start);
    ans.provider_metadata["backend"] = "replay";
    ans.provider_metadata["source_line"] = std::to_string(line_no);
    if (rec.contains("model") && rec["model"].is_string()) {
      ans.provider_metadata["source_model"] = rec["model"].get<std::string>();
    }
    return ans;
  }
  throw GatewayError(GatewayError::Kind::Protocol,
                     "replay model '" + config.id + "': no recorded response for task " + want_task +
                         (ctx->byte_limit ? " byte_limit " + std::to_string(*ctx->byte_limit) : "") +
                         " iteration " + std::to_string(ctx->iteration));
}

// ---- command ---------------------------------------------------------------

inline void ignore_sigpipe_once() {
  static const bool done = [] {
    std::signal(SIGPIPE, SIG_IGN);
    return true;
  }();
  (void)done;
}

inline std::vector<std::string> command_argv(const ModelConfig& config) {
  std::vector<std::string> argv{config.extra_params.at("exec")};
  auto it = config.extra_params.find("args");
  if (it != config.extra_params.end()) {
    std::size_t pos = 0;
    while (pos < it->second.size()) {
      std::size_t sp = it->second.find(' ', pos);
      if (sp == std::string::npos) sp = it->second.size();
      if (sp > pos) argv.push_back(it->second.substr(pos, sp - pos));
      pos = sp + 1;
    }
  }
  return argv;
}

/// Runs the configured executable, feeding the prompt on stdin and collecting
/// stdout, with writes and reads multiplexed so large prompts cannot deadlock
/// against a full pipe. The timeout covers the whole exchange.
inline ModelAnswer command_complete(const ModelConfig& config, const std::string& prompt) {
  ignore_sigpipe_once();
  auto start = std::chrono::steady_clock::now();
  auto deadline = start + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                              std::chrono::duration<double>(config.timeout_s));

  std::vector<std::string> argv = command_argv(config);
  int to_child[2], from_child[2];
  if (pipe(to_child) != 0 || pipe(from_child) != 0) {
    throw GatewayError(GatewayError::Kind::Protocol,
                       std::string("command model: pipe failed: ") + std::strerror(errno));
  }
  pid_t pid = fork();
  if (pid < 0) {
    throw GatewayError(GatewayError::Kind::Protocol,
                       std::string("command model: fork failed: ") + std::strerror(errno));
  }
  if (pid == 0) {
    dup2(to_child[0], STDIN_FILENO);
    dup2(from_child[1], STDOUT_FILENO);
    close(to_child[0]);
    close(to_child[1]);
    close(from_child[0]);
    close(from_child[1]);
    std::vector<char*> cargv;
    for (auto& a : argv) cargv.push_back(a.data());
    cargv.push_back(nullptr);
    execvp(cargv[0], cargv.data());
    _exit(127);
  }
  close(to_child[0]);
  close(from_child[1]);
  int wfd = to_child[1];
  int rfd = from_child[0];
  fcntl(wfd, F_SETFL, O_NONBLOCK);
  fcntl(rfd, F_SETFL, O_NONBLOCK);

  std::string output;
  std::size_t written = 0;
  bool write_open = true;
  bool read_open = true;
  bool timed_out = false;
  char buf[4096];
  while (read_open) {
    auto remaining =
        std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now());
    if (remaining.count() <= 0) {
      timed_out = true;
      break;
    }
    pollfd fds[2];
    nfds_t nfds = 0;
    if (write_open) fds[nfds++] = pollfd{wfd, POLLOUT, 0};
    fds[nfds++] = pollfd{rfd, POLLIN, 0};
    int rc = poll(fds, nfds, static_cast<int>(std::min<long long>(remaining.count(), 200)));
    if (rc < 0 && errno != EINTR) break;
    for (nfds_t i = 0; i < nfds; ++i) {
      if (fds[i].fd == wfd && (fds[i].revents & (POLLOUT | POLLERR | POLLHUP))) {
        if (fds[i].revents & (POLLERR | POLLHUP)) {
          close(wfd);  // child stopped reading; not an error for prompt-ignoring tools
          write_open = false;
          continue;
        }
        ssize_t n = write(wfd, prompt.data() + written, prompt.size() - written);
        if (n > 0) written += static_cast<std::size_t>(n);
        if (n < 0 && errno != EAGAIN && errno != EINTR) {
          close(wfd);
          write_open = false;
        } else if (written == prompt.size()) {
          close(wfd);
          write_open = false;
        }
      } else if (fds[i].fd == rfd && (fds[i].revents & (POLLIN | POLLHUP))) {
        ssize_t n = read(rfd, buf, sizeof buf);
        if (n > 0) {
          output.append(buf, static_cast<std::size_t>(n));
        } else if (n == 0) {
          read_open = false;
        } else if (errno != EAGAIN && errno != EINTR) {
          read_open = false;
        }
      }
    }
  }
  if (write_open) close(wfd);
  close(rfd);

  int status = 0;
  if (timed_out) {
    kill(pid, SIGKILL);
    waitpid(pid, &status, 0);
    throw GatewayError(GatewayError::Kind::Protocol,
                       "command model '" + config.id + "': timed out after " +
                           std::to_string(config.timeout_s) + "s");
  }
  // Child closed stdout but may still be running; give it the rest of the
  // timeout to exit.
  for (;;) {
    pid_t r = waitpid(pid, &status, WNOHANG);
    if (r == pid) break;
    if (std::chrono::steady_clock::now() >= deadline) {
      kill(pid, SIGKILL);
      waitpid(pid, &status, 0);
      throw GatewayError(GatewayError::Kind::Protocol,
                         "command model '" + config.id + "': timed out waiting for exit");
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(5));
  }
  if (WIFSIGNALED(status)) {
    throw GatewayError(GatewayError::Kind::Protocol,
                       "command model '" + config.id + "': killed by signal " +
                           std::to_string(WTERMSIG(status)));
  }
  int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  if (code != 0) {
    std::string hint = code == 127 ? " (executable not found?)" : "";
    throw GatewayError(GatewayError::Kind::Protocol,
                       "command model '" + config.id + "': exited with status " +
                           std::to_string(code) + hint);
  }
  ModelAnswer ans;
  ans.text = std::move(output);
  ans.latency_s = seconds_since(start);
  ans.provider_metadata["backend"] = "command";
  ans.provider_metadata["exit_status"] = "0";
  return ans;
}

// ---- http-chat -------------------------------------------------------------

inline bool looks_like_context_overflow(const std::string& body) {
  std::string lower = to_lower(body);
  static const char* markers[] = {"context_length", "context length",   "maximum context",
                                  "prompt is too long", "too many tokens", "input is too long"};
  for (const char* m : markers) {
    if (lower.find(m) != std::string::npos) return true;
  }
  return false;
}

struct EndpointParts {
  std::string base;  // scheme://host[:port]
  std::string path;  // leading '/'
};

inline EndpointParts split_endpoint(const std::string& url) {
  auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw GatewayError(GatewayError::Kind::Config, "endpoint '" + url + "' has no scheme");
  }
  auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

inline nlohmann::json chat_request_body(const ModelConfig& config, const std::string& prompt,
                                        const std::string& shape) {
  nlohmann::json body;
  body["model"] = config.model_name;
  body["messages"] = nlohmann::json::array({{{"role", "user"}, {"content", prompt}}});
  if (config.temperature) body["temperature"] = *config.temperature;
  long long max_tokens = 0;
  auto it = config.extra_params.find("max_tokens");
  if (it != config.extra_params.end()) max_tokens = std::stoll(it->second);
  if (shape == "anthropic") {
    body["max_tokens"] = max_tokens > 0 ? max_tokens : 4096;
  } else if (max_tokens > 0) {
    body["max_tokens"] = max_tokens;
  }
  return body;
}

/// Pulls the assistant text out of a 200 response. Returns the text plus the
/// provider's stop/finish reason (empty when absent).
inline std::pair<std::string, std::string> parse_chat_response(const nlohmann::json& j,
                                                               const std::string& shape) {
  if (shape == "anthropic") {
    if (j.contains("content") && j["content"].is_array() && !j["content"].empty() &&
        j["content"][0].contains("text")) {
      return {j["content"][0]["text"].get<std::string>(), j.value("stop_reason", std::string())};
    }
  } else {
    if (j.contains("choices") && j["choices"].is_array() && !j["choices"].empty()) {
      const auto& choice = j["choices"][0];
      if (choice.contains("message") && choice["message"].contains("content") &&
          choice["message"]["content"].is_string()) {
        return {choice["message"]["content"].get<std::string>(),
                choice.value("finish_reason", std::string())};
      }
    }
  }
  throw GatewayError(GatewayError::Kind::Protocol,
                     "http-chat: response body has no assistant text (shape " + shape + ")");
}

inline ModelAnswer http_chat_complete(const ModelConfig& config, const std::string& prompt) {
  auto start = std::chrono::steady_clock::now();
  auto deadline = start + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                              std::chrono::duration<double>((config.max_retries + 1) * config.timeout_s));

  std::string api_key;
  if (!config.auth_env_var.empty()) {
    const char* v = std::getenv(config.auth_env_var.c_str());
    if (v == nullptr || *v == '\0') {
      throw GatewayError(GatewayError::Kind::Auth,
                         "model '" + config.id + "': environment variable " + config.auth_env_var +
                             " is not set");
    }
    api_key = v;
  }
  std::string shape = extra_or(config, "api_shape", "openai");
  if (shape != "openai" && shape != "anthropic") {
    throw GatewayError(GatewayError::Kind::Config,
                       "model '" + config.id + "': unknown api_shape '" + shape + "'");
  }
  EndpointParts ep = split_endpoint(config.endpoint);
  std::string body = chat_request_body(config, prompt, shape).dump();

  httplib::Headers headers;
  if (!api_key.empty()) {
    if (shape == "anthropic") {
      headers.emplace("x-api-key", api_key);
      headers.emplace("anthropic-version", "2023-06-01");
    } else {
      headers.emplace("Authorization", "Bearer " + api_key);
    }
  } else if (shape == "anthropic") {
    headers.emplace("anthropic-version", "2023-06-01");
  }

  long long backoff_ms = 1000;
  try {
    backoff_ms = std::stoll(extra_or(config, "initial_backoff_ms", "1000"));
  } catch (const std::exception&) {
    throw GatewayError(GatewayError::Kind::Config,
                       "model '" + config.id + "': initial_backoff_ms must be an integer");
  }
  SplitMix64 jitter_rng(fnv1a64_u64(
      fnv1a64(config.id),
      static_cast<std::uint64_t>(std::chrono::steady_clock::now().time_since_epoch().count())));

  std::string last_failure = "no attempt made";
  int attempts = 0;
  for (int attempt = 0; attempt <= config.max_retries; ++attempt) {
    if (std::chrono::steady_clock::now() >= deadline) break;
    ++attempts;

    httplib::Client cli(ep.base);
    auto secs = static_cast<time_t>(config.timeout_s);
    auto usecs = static_cast<long>((config.timeout_s - static_cast<double>(secs)) * 1e6);
    cli.set_connection_timeout(secs, usecs);
    cli.set_read_timeout(secs, usecs);
    cli.set_write_timeout(secs, usecs);

    auto res = cli.Post(ep.path, headers, body, "application/json");
    bool transient = false;
    if (!res) {
      last_failure = "connection error: " + httplib::to_string(res.error());
      transient = true;
    } else if (res->status == 200) {
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(res->body);
      } catch (const nlohmann::json::exception& e) {
        throw GatewayError(GatewayError::Kind::Protocol,
                           std::string("http-chat: 200 response is not JSON: ") + e.what());
      }
      auto [text, reason] = parse_chat_response(j, shape);
      ModelAnswer ans;
      ans.text = std::move(text);
      ans.truncated = reason == "length" || reason == "max_tokens";
      ans.latency_s = seconds_since(start);
      ans.provider_metadata["backend"] = "http-chat";
      ans.provider_metadata["attempts"] = std::to_string(attempts);
      ans.provider_metadata["status"] = "200";
      if (!reason.empty()) ans.provider_metadata["finish_reason"] = reason;
      return ans;
    } else if (res->status == 429 || res->status >= 500) {
      last_failure = "HTTP " + std::to_string(res->status);
      transient = true;
    } else if (res->status == 401 || res->status == 403) {
      throw GatewayError(GatewayError::Kind::Auth, "model '" + config.id +
                                                       "': authentication failed (HTTP " +
                                                       std::to_string(res->status) + ")");
    } else if (res->status == 400 && looks_like_context_overflow(res->body)) {
      // The prompt exceeded the provider's context window. Report an empty,
      // truncated answer so scoring proceeds instead of aborting the trial.
      ModelAnswer ans;
      ans.truncated = true;
      ans.latency_s = seconds_since(start);
      ans.provider_metadata["backend"] = "http-chat";
      ans.provider_metadata["attempts"] = std::to_string(attempts);
      ans.provider_metadata["status"] = "400";
      ans.provider_metadata["error"] = "context window exceeded";
      return ans;
    } else {
      throw GatewayError(GatewayError::Kind::Protocol,
                         "model '" + config.id + "': HTTP " + std::to_string(res->status) + ": " +
                             res->body.substr(0, 200));
    }

    if (transient && attempt < config.max_retries) {
      long long delay = backoff_ms;
      for (int k = 0; k < attempt; ++k) delay = std::min<long long>(delay * 2, 60000);
      delay = std::min<long long>(delay, 60000);
      double factor = 0.75 + 0.5 * jitter_rng.unit();  // +/-25% jitter
      auto wait = std::chrono::milliseconds(static_cast<long long>(static_cast<double>(delay) * factor));
      auto remaining = deadline - std::chrono::steady_clock::now();
      if (wait > remaining) break;
      std::this_thread::sleep_for(wait);
    }
  }
  throw GatewayError(GatewayError::Kind::RetriesExhausted,
                     "model '" + config.id + "': giving up after " + std::to_string(attempts) +
                         " attempt(s); last failure: " + last_failure);
}

}  // namespace gateway_detail

/// Submits one prompt to the configured model and returns its answer.
/// `ctx` is optional but required by the replay backend and the ideal mock.
inline ModelAnswer complete(const ModelConfig& config, const std::string& prompt,
                            const TrialContext* ctx = nullptr) {
  if (prompt.empty()) {
    throw GatewayError(GatewayError::Kind::Config, "model '" + config.id + "': prompt is empty");
  }
  validate_model_config(config);
  switch (config.kind) {
    case ModelKind::Mock:
      return gateway_detail::mock_complete(config, prompt, ctx);
    case ModelKind::Replay:
      return gateway_detail::replay_complete(config, ctx);
    case ModelKind::Command:
      return gateway_detail::command_complete(config, prompt);
    case ModelKind::HttpChat:
      return gateway_detail::http_chat_complete(config, prompt);
  }
  throw GatewayError(GatewayError::Kind::Config, "model '" + config.id + "': unknown kind");
}

}  // namespace ttb
