#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "citecheck/core.hpp"

namespace citecheck {

/// Text generator behind the Answer/Check/Refine calls.
///
/// Implementations override complete(); callers go through generate(), which
/// rejects empty prompts, trims the completion and reports an empty
/// completion as BackendRefusal. Implementations must tolerate concurrent
/// calls. At temperature 0 a conforming backend returns the same text for the
/// same prompt.
class GeneratorBackend {
 public:
  virtual ~GeneratorBackend() = default;

  std::string generate(const std::string& prompt, const DecodingParams& params);

 protected:
  virtual std::string complete(const std::string& prompt, const DecodingParams& params) = 0;
};

/// Raw backend output: a hard label, or an entailment probability.
using EntailmentJudgement = std::variant<bool, double>;

struct VerifierOptions {
  double threshold = 0.5;           // applies to probability outputs only
  std::size_t char_budget = 12000;  // premise + hypothesis
};

/// Entailment verifier. check_entailment() is total: an empty premise is
/// never supported and costs no backend call, and an over-long premise loses
/// its tail so the hypothesis always reaches the backend intact.
class VerifierBackend {
 public:
  explicit VerifierBackend(VerifierOptions options = {}) : options_(options) {}
  virtual ~VerifierBackend() = default;

  EntailmentVerdict check_entailment(std::string_view premise, std::string_view hypothesis);

  const VerifierOptions& options() const noexcept { return options_; }
  void set_options(const VerifierOptions& options) { options_ = options; }

 protected:
  virtual EntailmentJudgement judge(const std::string& premise, const std::string& hypothesis) = 0;

 private:
  VerifierOptions options_;
};

/// Cuts the premise so premise + hypothesis fits in `budget` bytes, backing
/// off to a UTF-8 character boundary.
std::string truncate_premise(std::string_view premise, std::string_view hypothesis, std::size_t budget);

/// "Title: {title}. {text}" blocks in ascending index order, one per line.
std::string concat_premise(std::vector<Passage> passages);

/// Premise for a citation set drawn from `passages`.
std::string concat_premise(const PassageSet& passages, const CitationSet& citations);

}  // namespace citecheck
