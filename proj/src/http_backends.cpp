#include "citecheck/http_backends.hpp"

#include <cstdlib>
#include <thread>

#include <httplib.h>

namespace citecheck {
namespace {

struct SplitUrl {
  std::string origin;  // scheme://host[:port]
  std::string prefix;  // path part, no trailing slash
};

SplitUrl split_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  const auto path_start = url.find('/', scheme_end == std::string::npos ? 0 : scheme_end + 3);
  SplitUrl out;
  out.origin = url.substr(0, path_start);
  if (path_start != std::string::npos) out.prefix = url.substr(path_start);
  while (!out.prefix.empty() && out.prefix.back() == '/') out.prefix.pop_back();
  return out;
}

std::string bearer_token(const HttpTarget& target) {
  if (target.api_key_env.empty()) return {};
  const char* value = std::getenv(target.api_key_env.c_str());
  if (value == nullptr || *value == '\0') {
    throw Error(ErrorCode::InvalidConfig, "environment variable " + target.api_key_env + " is not set");
  }
  return value;
}

bool retryable_status(int status) { return status == 429 || status >= 500; }

}  // namespace

nlohmann::json post_json(const HttpTarget& target, const nlohmann::json& body) {
  const SplitUrl url = split_url(target.base_url);
  const std::string path = url.prefix + target.path;
  const std::string token = bearer_token(target);
  const std::string payload = body.dump();

  std::string last_error;
  auto delay = target.retry.base_delay;
  const int attempts = std::max(1, target.retry.max_attempts);
  for (int attempt = 1; attempt <= attempts; ++attempt) {
    httplib::Client client(url.origin);
    if (!client.is_valid()) {
      throw Error(ErrorCode::InvalidConfig, "unsupported endpoint URL: " + target.base_url);
    }
    const auto seconds = std::chrono::duration_cast<std::chrono::seconds>(target.timeout);
    const auto micros = std::chrono::duration_cast<std::chrono::microseconds>(target.timeout - seconds);
    client.set_connection_timeout(seconds.count(), micros.count());
    client.set_read_timeout(seconds.count(), micros.count());
    client.set_write_timeout(seconds.count(), micros.count());
    if (!token.empty()) client.set_bearer_token_auth(token);

    auto res = client.Post(path, payload, "application/json");
    if (!res) {
      last_error = httplib::to_string(res.error());
    } else if (res->status >= 200 && res->status < 300) {
      auto parsed = nlohmann::json::parse(res->body, nullptr, false);
      if (parsed.is_discarded()) {
        throw Error(ErrorCode::BackendUnavailable, "malformed JSON from " + target.base_url + path);
      }
      return parsed;
    } else if (!retryable_status(res->status)) {
      throw Error(ErrorCode::BackendUnavailable, "HTTP " + std::to_string(res->status) + " from " +
                                                     target.base_url + path + ": " + res->body.substr(0, 200));
    } else {
      last_error = "HTTP " + std::to_string(res->status);
    }

    if (attempt < attempts) {
      std::this_thread::sleep_for(delay);
      delay = std::chrono::milliseconds(static_cast<long long>(delay.count() * target.retry.multiplier));
    }
  }
  throw Error(ErrorCode::BackendUnavailable, target.base_url + path + " failed after " +
                                                 std::to_string(attempts) + " attempts: " + last_error);
}

nlohmann::json build_chat_request(const std::string& model, const std::string& prompt,
                                  const DecodingParams& params) {
  return {
      {"model", model},
      {"messages", nlohmann::json::array({{{"role", "user"}, {"content", prompt}}})},
      {"temperature", params.temperature},
      {"max_tokens", params.max_new_tokens},
  };
}

std::string parse_chat_response(const nlohmann::json& response) {
  const auto choices = response.find("choices");
  if (choices == response.end() || !choices->is_array() || choices->empty()) {
    throw Error(ErrorCode::BackendUnavailable, "chat completion response has no choices");
  }
  const auto& first = (*choices)[0];
  if (first.contains("message") && first["message"].contains("content") &&
      first["message"]["content"].is_string()) {
    return first["message"]["content"].get<std::string>();
  }
  if (first.contains("message") && first["message"].contains("content") && first["message"]["content"].is_null()) {
    return {};
  }
  throw Error(ErrorCode::BackendUnavailable, "chat completion choice has no message content");
}

HttpChatGenerator::HttpChatGenerator(ChatCompletionConfig config) : config_(std::move(config)) {
  if (config_.model.empty()) throw Error(ErrorCode::InvalidConfig, "chat completion backend needs a model name");
  bearer_token(config_.target);
}

std::string HttpChatGenerator::complete(const std::string& prompt, const DecodingParams& params) {
  return parse_chat_response(post_json(config_.target, build_chat_request(config_.model, prompt, params)));
}

EntailmentJudgement parse_entailment_response(const nlohmann::json& response) {
  if (response.is_object()) {
    if (auto it = response.find("entailed"); it != response.end() && it->is_boolean()) {
      return it->get<bool>();
    }
    if (auto it = response.find("score"); it != response.end() && it->is_number()) {
      return it->get<double>();
    }
  }
  throw Error(ErrorCode::BackendUnavailable, "entailment response needs 'entailed' or 'score': " +
                                                 response.dump().substr(0, 200));
}

HttpEntailmentVerifier::HttpEntailmentVerifier(EntailmentServiceConfig config)
    : VerifierBackend(config.options), target_(std::move(config.target)) {
  bearer_token(target_);
}

EntailmentJudgement HttpEntailmentVerifier::judge(const std::string& premise, const std::string& hypothesis) {
  return parse_entailment_response(post_json(target_, {{"premise", premise}, {"hypothesis", hypothesis}}));
}

}  // namespace citecheck
