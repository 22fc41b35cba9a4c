#include <catch2/catch_amalgamated.hpp>

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <string>
#include <thread>

#include "ttb/model/gateway.hpp"
#include "ttb/tasks/generators.hpp"

using namespace ttb;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const std::string& name, const std::string& content) {
  fs::path dir = fs::temp_directory_path() / "ttb_gateway_tests";
  fs::create_directories(dir);
  fs::path p = dir / name;
  std::ofstream out(p, std::ios::trunc | std::ios::binary);
  out << content;
  return p;
}

ModelConfig mock_config(std::map<std::string, std::string> extra = {}) {
  ModelConfig c;
  c.id = "m";
  c.kind = ModelKind::Mock;
  c.extra_params = std::move(extra);
  return c;
}

/// In-process HTTP endpoint for exercising the chat backend.
struct StubServer {
  httplib::Server svr;
  int port = 0;
  std::thread thread;

  void start() {
    port = svr.bind_to_any_port("127.0.0.1");
    REQUIRE(port > 0);
    thread = std::thread([this] { svr.listen_after_bind(); });
    svr.wait_until_ready();
  }

  ~StubServer() {
    svr.stop();
    if (thread.joinable()) thread.join();
  }

  std::string url(const std::string& path) const {
    return "http://127.0.0.1:" + std::to_string(port) + path;
  }
};

ModelConfig http_config(const std::string& endpoint) {
  ModelConfig c;
  c.id = "h";
  c.kind = ModelKind::HttpChat;
  c.endpoint = endpoint;
  c.model_name = "test-model";
  c.timeout_s = 10.0;
  c.max_retries = 3;
  c.extra_params["initial_backoff_ms"] = "10";
  return c;
}

}  // namespace

TEST_CASE("mock backend: echo, fixed, and canned behaviors") {
  REQUIRE(complete(mock_config(), "ping").text == "ping");

  ModelConfig fixed = mock_config({{"behavior", "fixed"}, {"text", "always this"}});
  ModelAnswer a = complete(fixed, "whatever");
  REQUIRE(a.text == "always this");
  REQUIRE(a.provider_metadata.at("backend") == "mock");

  std::string key = "canned:" + hex_u64(fnv1a64("the prompt"));
  ModelConfig canned = mock_config({{"behavior", "canned"}, {key, "the answer"}});
  REQUIRE(complete(canned, "the prompt").text == "the answer");

  try {
    complete(canned, "a different prompt");
    FAIL("expected a protocol error for the missing canned response");
  } catch (const GatewayError& e) {
    REQUIRE(e.kind() == GatewayError::Kind::Protocol);
  }
}

TEST_CASE("mock backend: configuration failures carry the Config kind") {
  try {
    complete(mock_config({{"behavior", "fixed"}}), "p");
    FAIL("fixed without text must fail");
  } catch (const GatewayError& e) {
    REQUIRE(e.kind() == GatewayError::Kind::Config);
  }

  try {
    complete(mock_config({{"behavior", "who knows"}}), "p");
    FAIL("unknown behavior must fail");
  } catch (const GatewayError& e) {
    REQUIRE(e.kind() == GatewayError::Kind::Config);
  }

  try {
    complete(mock_config(), "");
    FAIL("empty prompt must fail");
  } catch (const GatewayError& e) {
    REQUIRE(e.kind() == GatewayError::Kind::Config);
  }
}

TEST_CASE("mock backend: ideal behavior reproduces the perfect answer") {
  TaskInstance inst = generate_task(TaskId::T4, 1000, 42);
  TrialContext ctx;
  ctx.task = TaskId::T4;
  ctx.byte_limit = 1000;
  ctx.seed = 42;
  ctx.instance = &inst;

  ModelConfig ideal = mock_config({{"behavior", "ideal"}});
  REQUIRE(complete(ideal, inst.prompt, &ctx).text == ideal_answer(inst));

  try {
    complete(ideal, inst.prompt);  // no context
    FAIL("ideal without context must fail");
  } catch (const GatewayError& e) {
    REQUIRE(e.kind() == GatewayError::Kind::Config);
  }
}

TEST_CASE("replay backend: finds the record with matching coordinates") {
  std::string lines =
      R"({"task":"t4","byte_limit":1000,"iteration":1,"model":"alpha","response":"wrong size"})"
      "\n"
      "not json at all\n"
      "\n"
      R"({"task":"t4","byte_limit":2000,"iteration":1,"model":"alpha","response":"alpha says"})"
      "\n"
      R"({"task":"t4","byte_limit":2000,"iteration":1,"model":"beta","response":"beta says","truncated":true})"
      "\n"
      R"({"task":"t1","iteration":1,"model":"alpha","response":"static task"})"
      "\n";
  fs::path file = temp_file("replay.jsonl", lines);

  ModelConfig c;
  c.id = "r";
  c.kind = ModelKind::Replay;
  c.extra_params["input"] = file.string();

  TrialContext ctx;
  ctx.task = TaskId::T4;
  ctx.byte_limit = 2000;
  ctx.iteration = 1;

  SECTION("first match wins") {
    ModelAnswer a = complete(c, "p", &ctx);
    REQUIRE(a.text == "alpha says");
    REQUIRE(a.provider_metadata.at("source_model") == "alpha");
  }

  SECTION("source_model narrows the search") {
    c.extra_params["source_model"] = "beta";
    ModelAnswer a = complete(c, "p", &ctx);
    REQUIRE(a.text == "beta says");
    REQUIRE(a.truncated);
  }

  SECTION("static tasks match on a null byte limit") {
    TrialContext t1ctx;
    t1ctx.task = TaskId::T1;
    REQUIRE(complete(c, "p", &t1ctx).text == "static task");
  }

  SECTION("no match is a protocol error") {
    ctx.iteration = 9;
    try {
      complete(c, "p", &ctx);
      FAIL("expected no-match failure");
    } catch (const GatewayError& e) {
      REQUIRE(e.kind() == GatewayError::Kind::Protocol);
      REQUIRE(std::string(e.what()).find("iteration 9") != std::string::npos);
    }
  }

  SECTION("missing input path or context is a config error") {
    ModelConfig bare;
    bare.id = "r2";
    bare.kind = ModelKind::Replay;
    try {
      complete(bare, "p", &ctx);
      FAIL("missing input must fail");
    } catch (const GatewayError& e) {
      REQUIRE(e.kind() == GatewayError::Kind::Config);
    }
    try {
      complete(c, "p", nullptr);
      FAIL("missing context must fail");
    } catch (const GatewayError& e) {
      REQUIRE(e.kind() == GatewayError::Kind::Config);
    }
  }
}

TEST_CASE("command backend: round-trips the prompt through cat") {
  ModelConfig c;
  c.id = "cat";
  c.kind = ModelKind::Command;
  c.timeout_s = 30.0;
  c.extra_params["exec"] = "/bin/cat";

  ModelAnswer small = complete(c, "line one\nline two\n");
  REQUIRE(small.text == "line one\nline two\n");
  REQUIRE(small.provider_metadata.at("exit_status") == "0");

  // Half a megabyte exceeds any pipe buffer in both directions, so this
  // deadlocks unless writes and reads are interleaved.
  std::string big(512 * 1024, 'x');
  for (std::size_t i = 0; i < big.size(); i += 97) big[i] = '\n';
  REQUIRE(complete(c, big).text == big);
}

TEST_CASE("command backend: argument splitting and ignored stdin") {
  ModelConfig c;
  c.id = "echo";
  c.kind = ModelKind::Command;
  c.timeout_s = 30.0;
  c.extra_params["exec"] = "/bin/echo";
  c.extra_params["args"] = "alpha  beta";

  // echo never reads its stdin; a large prompt must not wedge the gateway.
  std::string big(256 * 1024, 'y');
  REQUIRE(complete(c, big).text == "alpha beta\n");
}

TEST_CASE("command backend: failures map to protocol errors") {
  ModelConfig c;
  c.id = "bad";
  c.kind = ModelKind::Command;
  c.timeout_s = 30.0;

  SECTION("nonzero exit status") {
    c.extra_params["exec"] = "/bin/false";
    try {
      complete(c, "p");
      FAIL("expected failure for /bin/false");
    } catch (const GatewayError& e) {
      REQUIRE(e.kind() == GatewayError::Kind::Protocol);
      REQUIRE(std::string(e.what()).find("exited with status 1") != std::string::npos);
    }
  }

  SECTION("missing executable surfaces the 127 hint") {
    c.extra_params["exec"] = "/no/such/binary_ttb";
    try {
      complete(c, "p");
      FAIL("expected failure for a missing executable");
    } catch (const GatewayError& e) {
      REQUIRE(std::string(e.what()).find("127") != std::string::npos);
      REQUIRE(std::string(e.what()).find("not found") != std::string::npos);
    }
  }

  SECTION("timeout kills the child") {
    c.extra_params["exec"] = "/bin/sleep";
    c.extra_params["args"] = "30";
    c.timeout_s = 0.2;
    try {
      complete(c, "p");
      FAIL("expected a timeout");
    } catch (const GatewayError& e) {
      REQUIRE(e.kind() == GatewayError::Kind::Protocol);
      REQUIRE(std::string(e.what()).find("timed out") != std::string::npos);
    }
  }
}

TEST_CASE("http backend: retries through 429 and reports the attempt count") {
  StubServer stub;
  std::atomic<int> hits{0};
  stub.svr.Post("/v1/chat/completions", [&](const httplib::Request&, httplib::Response& res) {
    int n = ++hits;
    if (n < 3) {
      res.status = 429;
      res.set_content("slow down", "text/plain");
      return;
    }
    nlohmann::json body{
        {"choices",
         {{{"message", {{"role", "assistant"}, {"content", "pong"}}}, {"finish_reason", "stop"}}}}};
    res.set_content(body.dump(), "application/json");
  });
  stub.start();

  ModelAnswer a = complete(http_config(stub.url("/v1/chat/completions")), "ping");
  REQUIRE(a.text == "pong");
  REQUIRE_FALSE(a.truncated);
  REQUIRE(a.provider_metadata.at("attempts") == "3");
  REQUIRE(hits.load() == 3);
}

TEST_CASE("http backend: openai shape carries bearer auth and the request body") {
  StubServer stub;
  std::string auth_header;
  nlohmann::json seen_body;
  std::mutex mu;
  stub.svr.Post("/chat", [&](const httplib::Request& req, httplib::Response& res) {
    std::lock_guard<std::mutex> lock(mu);
    auth_header = req.get_header_value("Authorization");
    seen_body = nlohmann::json::parse(req.body);
    nlohmann::json body{
        {"choices",
         {{{"message", {{"role", "assistant"}, {"content", "ok"}}}, {"finish_reason", "length"}}}}};
    res.set_content(body.dump(), "application/json");
  });
  stub.start();

  setenv("TTB_TEST_API_KEY", "sk-local-test", 1);
  ModelConfig c = http_config(stub.url("/chat"));
  c.auth_env_var = "TTB_TEST_API_KEY";
  c.temperature = 0.5;
  c.extra_params["max_tokens"] = "777";

  ModelAnswer a = complete(c, "the prompt");
  REQUIRE(a.text == "ok");
  REQUIRE(a.truncated);  // finish_reason=length means the reply was cut off

  std::lock_guard<std::mutex> lock(mu);
  REQUIRE(auth_header == "Bearer sk-local-test");
  REQUIRE(seen_body.at("model") == "test-model");
  REQUIRE(seen_body.at("messages").at(0).at("content") == "the prompt");
  REQUIRE(seen_body.at("temperature") == 0.5);
  REQUIRE(seen_body.at("max_tokens") == 777);
}

TEST_CASE("http backend: anthropic shape uses x-api-key and content blocks") {
  StubServer stub;
  std::string api_key_header, version_header;
  nlohmann::json seen_body;
  std::mutex mu;
  stub.svr.Post("/v1/messages", [&](const httplib::Request& req, httplib::Response& res) {
    std::lock_guard<std::mutex> lock(mu);
    api_key_header = req.get_header_value("x-api-key");
    version_header = req.get_header_value("anthropic-version");
    seen_body = nlohmann::json::parse(req.body);
    nlohmann::json body{{"content", {{{"type", "text"}, {"text", "hello there"}}}},
                        {"stop_reason", "max_tokens"}};
    res.set_content(body.dump(), "application/json");
  });
  stub.start();

  setenv("TTB_TEST_API_KEY", "sk-local-test", 1);
  ModelConfig c = http_config(stub.url("/v1/messages"));
  c.auth_env_var = "TTB_TEST_API_KEY";
  c.extra_params["api_shape"] = "anthropic";

  ModelAnswer a = complete(c, "hi");
  REQUIRE(a.text == "hello there");
  REQUIRE(a.truncated);  // stop_reason=max_tokens

  std::lock_guard<std::mutex> lock(mu);
  REQUIRE(api_key_header == "sk-local-test");
  REQUIRE_FALSE(version_header.empty());
  REQUIRE(seen_body.at("max_tokens") == 4096);  // shape requires one; default applies
}

TEST_CASE("http backend: auth failures are immediate and typed") {
  StubServer stub;
  stub.svr.Post("/chat", [](const httplib::Request&, httplib::Response& res) {
    res.status = 401;
    res.set_content("{\"error\":\"bad key\"}", "application/json");
  });
  stub.start();

  SECTION("401 from the provider") {
    try {
      complete(http_config(stub.url("/chat")), "p");
      FAIL("expected auth failure");
    } catch (const GatewayError& e) {
      REQUIRE(e.kind() == GatewayError::Kind::Auth);
    }
  }

  SECTION("missing environment variable, no request sent") {
    unsetenv("TTB_MISSING_KEY_VAR");
    ModelConfig c = http_config(stub.url("/chat"));
    c.auth_env_var = "TTB_MISSING_KEY_VAR";
    try {
      complete(c, "p");
      FAIL("expected auth failure");
    } catch (const GatewayError& e) {
      REQUIRE(e.kind() == GatewayError::Kind::Auth);
      REQUIRE(std::string(e.what()).find("TTB_MISSING_KEY_VAR") != std::string::npos);
    }
  }
}

TEST_CASE("http backend: context overflow becomes an empty truncated answer") {
  StubServer stub;
  stub.svr.Post("/chat", [](const httplib::Request&, httplib::Response& res) {
    res.status = 400;
    res.set_content(R"({"error":{"code":"context_length_exceeded","message":"too big"}})",
                    "application/json");
  });
  stub.start();

  ModelAnswer a = complete(http_config(stub.url("/chat")), "enormous prompt");
  REQUIRE(a.text.empty());
  REQUIRE(a.truncated);
  REQUIRE(a.provider_metadata.at("status") == "400");
}

TEST_CASE("http backend: persistent failures exhaust retries") {
  StubServer stub;
  std::atomic<int> hits{0};
  stub.svr.Post("/chat", [&](const httplib::Request&, httplib::Response& res) {
    ++hits;
    res.status = 503;
    res.set_content("down", "text/plain");
  });
  stub.start();

  ModelConfig c = http_config(stub.url("/chat"));
  c.max_retries = 1;
  try {
    complete(c, "p");
    FAIL("expected retries to run out");
  } catch (const GatewayError& e) {
    REQUIRE(e.kind() == GatewayError::Kind::RetriesExhausted);
    REQUIRE(std::string(e.what()).find("2 attempt") != std::string::npos);
  }
  REQUIRE(hits.load() == 2);
}

TEST_CASE("http backend: connection refusal is transient, then exhausted") {
  ModelConfig c = http_config("http://127.0.0.1:1/chat");
  c.max_retries = 0;
  c.timeout_s = 5.0;
  try {
    complete(c, "p");
    FAIL("expected a connection failure");
  } catch (const GatewayError& e) {
    REQUIRE(e.kind() == GatewayError::Kind::RetriesExhausted);
    REQUIRE(std::string(e.what()).find("connection error") != std::string::npos);
  }
}

TEST_CASE("model config validation rejects incomplete setups") {
  ModelConfig c;
  REQUIRE_THROWS_AS(validate_model_config(c), std::invalid_argument);  // no id
  c.id = "x";
  REQUIRE_NOTHROW(validate_model_config(c));

  c.kind = ModelKind::HttpChat;
  REQUIRE_THROWS_AS(validate_model_config(c), std::invalid_argument);  // no endpoint/model
  c.endpoint = "http://e/";
  c.model_name = "m";
  REQUIRE_NOTHROW(validate_model_config(c));

  c.kind = ModelKind::Command;
  REQUIRE_THROWS_AS(validate_model_config(c), std::invalid_argument);  // no exec
  c.extra_params["exec"] = "/bin/cat";
  REQUIRE_NOTHROW(validate_model_config(c));

  c.timeout_s = 0;
  REQUIRE_THROWS_AS(validate_model_config(c), std::invalid_argument);
  c.timeout_s = 5;
  c.max_retries = -1;
  REQUIRE_THROWS_AS(validate_model_config(c), std::invalid_argument);
}

TEST_CASE("roster loading: shapes, duplicates, and value coercion") {
  SECTION("bare array and wrapped object both load") {
    fs::path arr = temp_file("roster_arr.json",
                             R"([{"id":"a","kind":"mock"},{"id":"b","kind":"mock"}])");
    REQUIRE(load_model_roster(arr.string()).size() == 2);

    fs::path obj = temp_file("roster_obj.json", R"({"models":[{"id":"a","kind":"mock"}]})");
    REQUIRE(load_model_roster(obj.string()).size() == 1);
  }

  SECTION("numeric extra params become strings") {
    fs::path p = temp_file("roster_num.json",
                           R"([{"id":"a","kind":"mock","extra_params":{"max_tokens":512}}])");
    auto models = load_model_roster(p.string());
    REQUIRE(models.at(0).extra_params.at("max_tokens") == "512");
  }

  SECTION("duplicate ids are rejected") {
    fs::path p = temp_file("roster_dup.json", R"([{"id":"a"},{"id":"a"}])");
    REQUIRE_THROWS_WITH(load_model_roster(p.string()),
                        Catch::Matchers::ContainsSubstring("duplicate model id"));
  }

  SECTION("unknown kinds and malformed entries name the offending index") {
    fs::path p = temp_file("roster_kind.json", R"([{"id":"a"},{"id":"b","kind":"quantum"}])");
    REQUIRE_THROWS_WITH(load_model_roster(p.string()),
                        Catch::Matchers::ContainsSubstring("entry 1"));
  }

  SECTION("non-array documents are rejected") {
    fs::path p = temp_file("roster_scalar.json", R"("just a string")");
    REQUIRE_THROWS_AS(load_model_roster(p.string()), std::invalid_argument);
  }
}

TEST_CASE("sanitized config hides secret-looking extras but keeps the rest") {
  ModelConfig c;
  c.id = "m";
  c.kind = ModelKind::HttpChat;
  c.endpoint = "http://api.example/v1";
  c.model_name = "big-model";
  c.auth_env_var = "PROVIDER_API_KEY";
  c.extra_params["api_key"] = "sk-oops-a-real-secret";
  c.extra_params["session_token"] = "tok-123";
  c.extra_params["client_secret"] = "shh";
  c.extra_params["max_tokens"] = "256";

  nlohmann::json j = sanitized_config_json(c);
  std::string flat = j.dump();
  REQUIRE(flat.find("sk-oops-a-real-secret") == std::string::npos);
  REQUIRE(flat.find("tok-123") == std::string::npos);
  REQUIRE(flat.find("shh") == std::string::npos);
  REQUIRE(j["extra_params"]["api_key"] == "***");
  REQUIRE(j["extra_params"]["session_token"] == "***");
  REQUIRE(j["extra_params"]["client_secret"] == "***");
  REQUIRE(j["extra_params"]["max_tokens"] == "256");
  // The variable NAME is not a secret; the value it holds is never read here.
  REQUIRE(j["auth_env_var"] == "PROVIDER_API_KEY");
}
