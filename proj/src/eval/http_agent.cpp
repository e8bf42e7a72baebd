#include <httplib.h>

#include <algorithm>
#include <cstdlib>
#include <thread>

#include "robench/errors.hpp"
#include "robench/eval.hpp"

namespace robench {

using nlohmann::json;

namespace {

bool retryable(int status) { return status <= 0 || status == 429 || status >= 500; }

class SlotGuard {
 public:
  explicit SlotGuard(std::counting_semaphore<>& s) : s_(s) { s_.acquire(); }
  ~SlotGuard() { s_.release(); }
  SlotGuard(const SlotGuard&) = delete;
  SlotGuard& operator=(const SlotGuard&) = delete;

 private:
  std::counting_semaphore<>& s_;
};

}  // namespace

HttpAgentConfig http_agent_config_from_json(const json& j) {
  if (!j.is_object()) throw SchemaError("agent config must be an object");
  HttpAgentConfig c;
  try {
    c.base_url = j.value("base_url", c.base_url);
    c.path = j.value("path", c.path);
    c.model = j.value("model", c.model);
    c.api_key_env = j.value("api_key_env", c.api_key_env);
    c.temperature = j.value("temperature", c.temperature);
    c.max_retries = j.value("max_retries", c.max_retries);
    c.initial_backoff =
        std::chrono::milliseconds(j.value("initial_backoff_ms", c.initial_backoff.count()));
    c.max_backoff = std::chrono::milliseconds(j.value("max_backoff_ms", c.max_backoff.count()));
    c.max_inflight = j.value("max_inflight", c.max_inflight);
    c.timeout_seconds = j.value("timeout_seconds", c.timeout_seconds);
  } catch (const json::exception& ex) {
    throw SchemaError(std::string("agent config: ") + ex.what());
  }
  if (c.max_inflight < 1 || c.max_retries < 0) {
    throw InvalidParams("max_inflight must be >= 1 and max_retries >= 0");
  }
  return c;
}

HttpAgent::HttpAgent(HttpAgentConfig config, Transport transport, Sleeper sleeper)
    : config_(std::move(config)),
      transport_(std::move(transport)),
      sleeper_(std::move(sleeper)),
      inflight_(std::make_unique<std::counting_semaphore<>>(std::max(1, config_.max_inflight))) {
  if (!sleeper_) sleeper_ = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
  if (!transport_) {
    const std::string base = config_.base_url;
    const std::string path = config_.path;
    const int timeout = config_.timeout_seconds;
    transport_ = [base, path, timeout](const std::string& body, const std::string& auth) {
      httplib::Client cli(base);
      cli.set_connection_timeout(timeout);
      cli.set_read_timeout(timeout);
      httplib::Headers headers;
      if (!auth.empty()) headers.emplace("Authorization", auth);
      auto res = cli.Post(path, headers, body, "application/json");
      if (!res) return RawResponse{0, httplib::to_string(res.error())};
      return RawResponse{res->status, res->body};
    };
  }
}

json HttpAgent::request_body(const std::string& prompt) const {
  return {{"model", config_.model},
          {"temperature", config_.temperature},
          {"messages", json::array({{{"role", "user"}, {"content", prompt}}})}};
}

AgentReply HttpAgent::complete(const AgentRequest& request) {
  std::string auth;
  if (!config_.api_key_env.empty()) {
    if (const char* key = std::getenv(config_.api_key_env.c_str())) {
      auth = std::string("Bearer ") + key;
    }
  }
  const std::string body = request_body(request.prompt).dump();
  auto delay = config_.initial_backoff;
  RawResponse res;
  for (int attempt = 0;; ++attempt) {
    {
      SlotGuard slot(*inflight_);
      res = transport_(body, auth);
    }
    if (!retryable(res.status) || attempt >= config_.max_retries) break;
    sleeper_(delay);
    delay = std::min(config_.max_backoff, delay * 2);
  }
  if (res.status <= 0) throw TransportError("no response: " + res.body);
  if (res.status < 200 || res.status >= 300) {
    throw TransportError("HTTP " + std::to_string(res.status) + ": " + res.body.substr(0, 200));
  }
  try {
    const json j = json::parse(res.body);
    AgentReply reply;
    reply.text = j.at("choices").at(0).at("message").at("content").get<std::string>();
    if (j.contains("usage") && j["usage"].contains("completion_tokens")) {
      reply.output_tokens = j["usage"]["completion_tokens"].get<long>();
    }
    return reply;
  } catch (const json::exception& ex) {
    throw TransportError(std::string("unexpected completion payload: ") + ex.what());
  }
}

}  // namespace robench
