#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "ttb/tasks/assets.hpp"
#include "ttb/tasks/task.hpp"
#include "ttb/util/strings.hpp"

namespace ttb {

enum class ModelKind { HttpChat, Command, Mock, Replay };

inline std::string to_string(ModelKind k) {
  switch (k) {
    case ModelKind::HttpChat: return "http-chat";
    case ModelKind::Command: return "command";
    case ModelKind::Mock: return "mock";
    case ModelKind::Replay: return "replay";
  }
  return "?";
}

inline std::optional<ModelKind> model_kind_from_string(std::string_view s) {
  if (s == "http-chat") return ModelKind::HttpChat;
  if (s == "command") return ModelKind::Command;
  if (s == "mock") return ModelKind::Mock;
  if (s == "replay") return ModelKind::Replay;
  return std::nullopt;
}

/// One model endpoint. Secrets are referenced by environment variable name
/// only and read at request time; they never live in the config and never
/// reach persisted records.
struct ModelConfig {
  std::string id;
  ModelKind kind = ModelKind::Mock;
  std::string endpoint;      // http-chat: full URL of the chat completions route
  std::string model_name;    // http-chat: provider model identifier
  std::string auth_env_var;  // name of the env var holding the API key
  double timeout_s = 60.0;
  int max_retries = 3;
  std::optional<double> temperature;
  std::map<std::string, std::string> extra_params;
};

struct ModelAnswer {
  std::string text;
  double latency_s = 0.0;
  bool truncated = false;
  std::map<std::string, std::string> provider_metadata;
};

/// Trial coordinates handed to complete() so the ideal mock can build the
/// perfect answer and the replay backend can find the matching record.
struct TrialContext {
  TaskId task = TaskId::T1;
  std::optional<long long> byte_limit;
  int iteration = 1;
  std::uint64_t seed = 0;
  const TaskInstance* instance = nullptr;
};

inline void validate_model_config(const ModelConfig& c) {
  if (c.id.empty()) throw std::invalid_argument("model config: id is required");
  if (c.kind == ModelKind::HttpChat && (c.endpoint.empty() || c.model_name.empty())) {
    throw std::invalid_argument("http-chat model '" + c.id +
                                "' requires both endpoint and model_name");
  }
  if (c.kind == ModelKind::Command && c.extra_params.count("exec") == 0) {
    throw std::invalid_argument("command model '" + c.id +
                                "' requires extra_params.exec (executable path)");
  }
  if (c.timeout_s <= 0) throw std::invalid_argument("model '" + c.id + "': timeout must be > 0");
  if (c.max_retries < 0) {
    throw std::invalid_argument("model '" + c.id + "': max_retries must be >= 0");
  }
}

inline ModelConfig model_config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("model entry must be a JSON object");
  ModelConfig c;
  c.id = j.value("id", std::string());
  std::string kind = j.value("kind", std::string("mock"));
  auto k = model_kind_from_string(kind);
  if (!k) throw std::invalid_argument("unknown model kind '" + kind + "'");
  c.kind = *k;
  c.endpoint = j.value("endpoint", std::string());
  c.model_name = j.value("model_name", std::string());
  c.auth_env_var = j.value("auth_env_var", std::string());
  c.timeout_s = j.value("timeout", 60.0);
  c.max_retries = j.value("max_retries", 3);
  if (j.contains("temperature") && !j["temperature"].is_null()) {
    c.temperature = j["temperature"].get<double>();
  }
  if (j.contains("extra_params")) {
    for (const auto& [key, val] : j["extra_params"].items()) {
      c.extra_params[key] = val.is_string() ? val.get<std::string>() : val.dump();
    }
  }
  validate_model_config(c);
  return c;
}

/// Effective configuration as embedded in result records: everything except
/// secret-looking extra parameters.
inline nlohmann::json sanitized_config_json(const ModelConfig& c) {
  nlohmann::json j{{"id", c.id},
                   {"kind", to_string(c.kind)},
                   {"timeout", c.timeout_s},
                   {"max_retries", c.max_retries}};
  if (!c.endpoint.empty()) j["endpoint"] = c.endpoint;
  if (!c.model_name.empty()) j["model_name"] = c.model_name;
  if (!c.auth_env_var.empty()) j["auth_env_var"] = c.auth_env_var;
  if (c.temperature) j["temperature"] = *c.temperature;
  if (!c.extra_params.empty()) {
    nlohmann::json extras = nlohmann::json::object();
    for (const auto& [key, val] : c.extra_params) {
      std::string lower = to_lower(key);
      // Keys ending in "tokens" are count parameters (max_tokens and friends);
      // a singular "token" anywhere in the name is treated as a credential.
      bool count_param =
          lower.size() >= 6 && lower.compare(lower.size() - 6, 6, "tokens") == 0;
      bool secret = lower.find("key") != std::string::npos ||
                    (!count_param && lower.find("token") != std::string::npos) ||
                    lower.find("secret") != std::string::npos ||
                    lower.find("authorization") != std::string::npos;
      extras[key] = secret ? "***" : val;
    }
    j["extra_params"] = extras;
  }
  return j;
}

/// Roster file: a JSON array of model configs, or an object with a "models"
/// array. Entries are validated; duplicate ids are rejected.
inline std::vector<ModelConfig> load_model_roster(const std::string& path) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(read_text_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("roster " + path + ": invalid JSON: " + e.what());
  }
  const nlohmann::json* arr = &doc;
  if (doc.is_object()) {
    if (!doc.contains("models")) {
      throw std::invalid_argument("roster " + path + ": expected an array or a \"models\" array");
    }
    arr = &doc["models"];
  }
  if (!arr->is_array()) {
    throw std::invalid_argument("roster " + path + ": expected an array of model configs");
  }
  std::vector<ModelConfig> out;
  std::map<std::string, bool> ids;
  for (std::size_t i = 0; i < arr->size(); ++i) {
    ModelConfig c;
    try {
      c = model_config_from_json((*arr)[i]);
    } catch (const std::exception& e) {
      throw std::invalid_argument("roster " + path + ": entry " + std::to_string(i) + ": " +
                                  e.what());
    }
    if (!ids.emplace(c.id, true).second) {
      throw std::invalid_argument("roster " + path + ": duplicate model id '" + c.id + "'");
    }
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace ttb
