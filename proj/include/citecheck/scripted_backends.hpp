#pragma once

#include <functional>
#include <map>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "citecheck/gateway.hpp"

namespace citecheck {

enum class MatchKind { Exact, Prefix };

struct ScriptRule {
  MatchKind match = MatchKind::Exact;
  std::string prompt;
  std::string response;
};

struct GenerationCall {
  std::string prompt;
  DecodingParams params;
};

/// Canned-response generator for tests and offline fixtures.
///
/// Exact rules win over prefix rules; prefix rules are tried in insertion
/// order. A prompt that matches nothing raises UnmatchedScript.
class ScriptedGenerator : public GeneratorBackend {
 public:
  ScriptedGenerator() = default;
  explicit ScriptedGenerator(const std::vector<ScriptRule>& rules);

  ScriptedGenerator& on_exact(std::string prompt, std::string response);
  ScriptedGenerator& on_prefix(std::string prefix, std::string response);

  std::vector<GenerationCall> call_log() const;
  std::size_t call_count() const;
  /// Number of logged calls whose prompt equals `prompt`.
  std::size_t calls_with_prompt(const std::string& prompt) const;

 protected:
  std::string complete(const std::string& prompt, const DecodingParams& params) override;

 private:
  mutable std::mutex mutex_;
  std::map<std::string, std::string> exact_;
  std::vector<std::pair<std::string, std::string>> prefixes_;
  std::vector<GenerationCall> log_;
};

struct VerifierCall {
  std::string premise;
  std::string hypothesis;

  bool operator==(const VerifierCall&) const = default;
};

/// Verifier driven by an exact (premise, hypothesis) table; unknown pairs
/// raise UnmatchedScript.
class ScriptedVerifier : public VerifierBackend {
 public:
  explicit ScriptedVerifier(VerifierOptions options = {}) : VerifierBackend(options) {}

  ScriptedVerifier& on(std::string premise, std::string hypothesis, bool entailed);
  ScriptedVerifier& on_score(std::string premise, std::string hypothesis, double score);

  std::vector<VerifierCall> call_log() const;
  std::size_t call_count() const;

 protected:
  EntailmentJudgement judge(const std::string& premise, const std::string& hypothesis) override;

 private:
  mutable std::mutex mutex_;
  std::map<std::pair<std::string, std::string>, EntailmentJudgement> table_;
  std::vector<VerifierCall> log_;
};

/// Verifier backed by a callable. Used for generated truth tables.
class FunctionVerifier : public VerifierBackend {
 public:
  using Judge = std::function<EntailmentJudgement(const std::string& premise, const std::string& hypothesis)>;

  explicit FunctionVerifier(Judge judge, VerifierOptions options = {})
      : VerifierBackend(options), judge_(std::move(judge)) {}

  std::vector<VerifierCall> call_log() const;
  std::size_t call_count() const;

 protected:
  EntailmentJudgement judge(const std::string& premise, const std::string& hypothesis) override;

 private:
  Judge judge_;
  mutable std::mutex mutex_;
  std::vector<VerifierCall> log_;
};

}  // namespace citecheck
