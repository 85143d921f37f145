#include "citecheck/scripted_backends.hpp"

#include <algorithm>

namespace citecheck {
namespace {

std::string preview(const std::string& text) {
  constexpr std::size_t kMax = 120;
  if (text.size() <= kMax) return text;
  return text.substr(0, kMax) + "...";
}

}  // namespace

ScriptedGenerator::ScriptedGenerator(const std::vector<ScriptRule>& rules) {
  for (const auto& rule : rules) {
    if (rule.match == MatchKind::Exact) {
      on_exact(rule.prompt, rule.response);
    } else {
      on_prefix(rule.prompt, rule.response);
    }
  }
}

ScriptedGenerator& ScriptedGenerator::on_exact(std::string prompt, std::string response) {
  std::lock_guard lock(mutex_);
  exact_.emplace(std::move(prompt), std::move(response));
  return *this;
}

ScriptedGenerator& ScriptedGenerator::on_prefix(std::string prefix, std::string response) {
  std::lock_guard lock(mutex_);
  prefixes_.emplace_back(std::move(prefix), std::move(response));
  return *this;
}

std::vector<GenerationCall> ScriptedGenerator::call_log() const {
  std::lock_guard lock(mutex_);
  return log_;
}

std::size_t ScriptedGenerator::call_count() const {
  std::lock_guard lock(mutex_);
  return log_.size();
}

std::size_t ScriptedGenerator::calls_with_prompt(const std::string& prompt) const {
  std::lock_guard lock(mutex_);
  return static_cast<std::size_t>(
      std::count_if(log_.begin(), log_.end(), [&](const GenerationCall& c) { return c.prompt == prompt; }));
}

std::string ScriptedGenerator::complete(const std::string& prompt, const DecodingParams& params) {
  std::lock_guard lock(mutex_);
  log_.push_back({prompt, params});
  if (auto it = exact_.find(prompt); it != exact_.end()) return it->second;
  for (const auto& [prefix, response] : prefixes_) {
    if (prompt.compare(0, prefix.size(), prefix) == 0) return response;
  }
  throw Error(ErrorCode::UnmatchedScript, "no scripted response for prompt: " + preview(prompt));
}

ScriptedVerifier& ScriptedVerifier::on(std::string premise, std::string hypothesis, bool entailed) {
  std::lock_guard lock(mutex_);
  table_.insert_or_assign({std::move(premise), std::move(hypothesis)}, EntailmentJudgement{entailed});
  return *this;
}

ScriptedVerifier& ScriptedVerifier::on_score(std::string premise, std::string hypothesis, double score) {
  std::lock_guard lock(mutex_);
  table_.insert_or_assign({std::move(premise), std::move(hypothesis)}, EntailmentJudgement{score});
  return *this;
}

std::vector<VerifierCall> ScriptedVerifier::call_log() const {
  std::lock_guard lock(mutex_);
  return log_;
}

std::size_t ScriptedVerifier::call_count() const {
  std::lock_guard lock(mutex_);
  return log_.size();
}

EntailmentJudgement ScriptedVerifier::judge(const std::string& premise, const std::string& hypothesis) {
  std::lock_guard lock(mutex_);
  log_.push_back({premise, hypothesis});
  if (auto it = table_.find({premise, hypothesis}); it != table_.end()) return it->second;
  throw Error(ErrorCode::UnmatchedScript,
              "no scripted verdict for hypothesis '" + preview(hypothesis) + "' against premise '" +
                  preview(premise) + "'");
}

std::vector<VerifierCall> FunctionVerifier::call_log() const {
  std::lock_guard lock(mutex_);
  return log_;
}

std::size_t FunctionVerifier::call_count() const {
  std::lock_guard lock(mutex_);
  return log_.size();
}

EntailmentJudgement FunctionVerifier::judge(const std::string& premise, const std::string& hypothesis) {
  {
    std::lock_guard lock(mutex_);
    log_.push_back({premise, hypothesis});
  }
  return judge_(premise, hypothesis);
}

}  // namespace citecheck
