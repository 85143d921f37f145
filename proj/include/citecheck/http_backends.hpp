#pragma once

#include <chrono>
#include <string>

#include <json.hpp>

#include "citecheck/gateway.hpp"

namespace citecheck {

struct RetryPolicy {
  int max_attempts = 3;
  std::chrono::milliseconds base_delay{500};
  double multiplier = 2.0;
};

/// Where a JSON endpoint lives. `base_url` may carry a path prefix
/// ("https://api.example.com/v1"); `path` is appended to it. The bearer
/// token is read from the environment variable named by `api_key_env`.
struct HttpTarget {
  std::string base_url = "http://127.0.0.1:8000";
  std::string path;
  std::string api_key_env;
  std::chrono::milliseconds timeout{120000};
  RetryPolicy retry;
};

/// POSTs `body` as JSON. Transport failures, 429 and 5xx are retried with
/// exponential backoff; other non-2xx statuses fail at once. Either way the
/// caller sees BackendUnavailable.
nlohmann::json post_json(const HttpTarget& target, const nlohmann::json& body);

struct ChatCompletionConfig {
  HttpTarget target{"http://127.0.0.1:8000/v1", "/chat/completions", "", std::chrono::milliseconds{120000}, {}};
  std::string model;
};

nlohmann::json build_chat_request(const std::string& model, const std::string& prompt, const DecodingParams& params);
/// Text of the first choice's message; BackendUnavailable if the shape is wrong.
std::string parse_chat_response(const nlohmann::json& response);

/// OpenAI-style chat-completion client.
class HttpChatGenerator : public GeneratorBackend {
 public:
  explicit HttpChatGenerator(ChatCompletionConfig config);

 protected:
  std::string complete(const std::string& prompt, const DecodingParams& params) override;

 private:
  ChatCompletionConfig config_;
};

struct EntailmentServiceConfig {
  HttpTarget target{"http://127.0.0.1:8001", "/entail", "", std::chrono::milliseconds{60000}, {}};
  VerifierOptions options;
};

/// Accepts {"entailed": bool} or {"score": number}.
EntailmentJudgement parse_entailment_response(const nlohmann::json& response);

/// Client for an entailment service taking {"premise", "hypothesis"}.
class HttpEntailmentVerifier : public VerifierBackend {
 public:
  explicit HttpEntailmentVerifier(EntailmentServiceConfig config);

 protected:
  EntailmentJudgement judge(const std::string& premise, const std::string& hypothesis) override;

 private:
  HttpTarget target_;
};

}  // namespace citecheck
