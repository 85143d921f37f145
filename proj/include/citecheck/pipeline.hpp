#pragma once

#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "citecheck/core.hpp"
#include "citecheck/gateway.hpp"
#include "citecheck/prompts.hpp"

namespace citecheck {

struct PipelineConfig {
  int k = 5;
  int few_shot_count = 2;
  std::vector<FewShotExample> few_shot_pool;
  DecodingParams decoding;
  double entailment_threshold = 0.5;
  int parallelism = 4;
  bool reverify_after_refine = false;

  /// Throws InvalidConfig when a field is out of range or the pool holds
  /// fewer demonstrations than requested.
  void validate() const;
  std::span<const FewShotExample> shots() const;
};

/// The part of the configuration that can change a run's output. Parallelism
/// is deliberately absent: results do not depend on scheduling.
struct ConfigSnapshot {
  int k = 5;
  int few_shot_count = 2;
  DecodingParams decoding;
  double entailment_threshold = 0.5;
  bool reverify_after_refine = false;

  bool operator==(const ConfigSnapshot&) const = default;
};

ConfigSnapshot snapshot(const PipelineConfig& config);

enum class StageKind { Initial, Evidence, Refine };

std::string_view to_string(StageKind stage);

namespace discard_reason {
inline constexpr std::string_view kUncited = "uncited";
inline constexpr std::string_view kUnsupported = "unsupported";
inline constexpr std::string_view kEmpty = "empty";
inline constexpr std::string_view kUnparseableVerdict = "unparseable_verdict";
inline constexpr std::string_view kRefusal = "refusal";
inline constexpr std::string_view kUnsupportedAfterRefine = "unsupported_after_refine";
}  // namespace discard_reason

namespace drop_reason {
inline constexpr std::string_view kOutOfRange = "out_of_range";
inline constexpr std::string_view kNotInEvidence = "not_in_verified_evidence";
}  // namespace drop_reason

struct VerdictRecord {
  std::string subject;  // statement text, or the passage title for utility checks
  std::variant<EntailmentVerdict, UtilityVerdict> verdict;

  bool operator==(const VerdictRecord&) const = default;
};

struct Discard {
  std::string text;
  std::string reason;

  bool operator==(const Discard&) const = default;
};

struct DroppedCitation {
  std::string statement_text;
  long long index = 0;
  std::string reason;

  bool operator==(const DroppedCitation&) const = default;
};

struct StageTrace {
  StageKind stage = StageKind::Initial;
  std::vector<std::string> prompts;
  std::vector<std::string> raw_outputs;
  std::vector<VerdictRecord> verdicts;
  std::vector<Discard> discarded;
  std::vector<DroppedCitation> dropped_citations;
  std::vector<Statement> outputs;  // statements passed on to refinement (stages 1 and 2)

  bool operator==(const StageTrace&) const = default;
};

struct StageTimings {
  double initial_ms = 0;
  double evidence_ms = 0;
  double refine_ms = 0;

  bool operator==(const StageTimings&) const = default;
};

struct RunRecord {
  std::string query_id;
  std::string question;
  AttributedAnswer final;
  std::vector<StageTrace> traces;  // initial, evidence, refine (fewer on failure)
  ConfigSnapshot config;
  StageTimings timings;
  std::string error;  // empty on success

  bool operator==(const RunRecord&) const = default;
};

struct StageResult {
  std::vector<Statement> statements;
  StageTrace trace;
};

struct RefineResult {
  AttributedAnswer answer;
  StageTrace trace;
};

/// A backend failure inside a stage, carrying whatever the stage traced
/// before it failed.
class StageFailure : public Error {
 public:
  StageFailure(const Error& cause, StageTrace partial)
      : Error(cause.code(), cause.what()), partial_(std::move(partial)) {}
  const StageTrace& partial() const noexcept { return partial_; }

 private:
  StageTrace partial_;
};

/// A failed run; `partial()` holds the traces of every stage that started.
class PipelineError : public Error {
 public:
  PipelineError(const Error& cause, RunRecord partial)
      : Error(cause.code(), cause.what()), partial_(std::move(partial)) {}
  const RunRecord& partial() const noexcept { return partial_; }

 private:
  RunRecord partial_;
};

inline constexpr std::string_view kAbstentionText = "No verified evidence.";

/// Answer over all passages, split into statements, keep only those whose
/// cited passages (concatenated) entail them. Uncited statements are
/// discarded without a verifier call.
StageResult stage_initial(const Query& query, const PassageSet& passages, GeneratorBackend& generator,
                          VerifierBackend& verifier, const PipelineConfig& config);

/// Per passage: a Yes/No usefulness check, then (on Yes only) a
/// single-passage answer whose statements are verified against that passage
/// alone and cited as [i]. Passages fan out over `config.parallelism`
/// workers; results are assembled in passage order.
StageResult stage_evidence(const Query& query, const PassageSet& passages, GeneratorBackend& generator,
                           VerifierBackend& verifier, const PipelineConfig& config);

/// Merge verified statements into the final answer. Citations the refiner
/// invents (outside the union of input citations) are dropped and traced.
/// With no input statements the result is an abstention and the generator
/// is not called. `reverifier` is consulted only when
/// `config.reverify_after_refine` is set.
RefineResult stage_refine(const Query& query, const PassageSet& passages, std::span<const Statement> statements,
                          GeneratorBackend& generator, VerifierBackend* reverifier, const PipelineConfig& config);

struct Backends {
  GeneratorBackend& generator;
  VerifierBackend& verifier;
};

/// Runs the three stages. Stages 1 and 2 execute concurrently when
/// parallelism > 1. Throws PipelineError with the partial record on failure.
RunRecord run(const Query& query, const PassageSet& passages, Backends backends, const PipelineConfig& config);

}  // namespace citecheck
