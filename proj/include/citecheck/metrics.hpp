#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "citecheck/core.hpp"
#include "citecheck/gateway.hpp"

namespace citecheck::metrics {

/// Lower-case, drop ASCII punctuation, drop the articles a/an/the, and
/// collapse whitespace.
std::string normalize_answer(std::string_view text);

/// Percentage of alias sets with at least one alias occurring (after
/// normalization) as a substring of the answer. Throws EmptyGold.
double em_recall(std::string_view answer_text, const std::vector<std::vector<std::string>>& gold);

/// Percentage of claims entailed by the whole answer. Throws EmptyGold.
double claim_recall(std::string_view answer_text, std::span<const std::string> claims, VerifierBackend& verifier);

/// Percentage of statements entailed by the concatenation of their cited
/// passages; uncited statements count as unsupported. One verifier call per
/// cited statement. Throws EmptyAnswer on an empty list.
double citation_recall(std::span<const Statement> statements, const PassageSet& passages, VerifierBackend& verifier);

/// Percentage of precise citations. A citation on an unsupported statement
/// is imprecise; on a supported statement it is imprecise when its passage
/// alone does not entail the statement while the remaining citations still
/// do. Throws NoCitations when no statement cites anything.
double citation_precision(std::span<const Statement> statements, const PassageSet& passages,
                          VerifierBackend& verifier);

struct CitationScores {
  double recall = 0;
  std::optional<double> precision;  // absent without citations
};

/// Recall and precision in one pass, sharing the full-set verifier calls.
CitationScores citation_scores(std::span<const Statement> statements, const PassageSet& passages,
                               VerifierBackend& verifier);

/// Harmonic mean; 0 when both inputs are 0.
double f1(double recall, double precision);

/// Scores on a 0-100 scale. Absent metrics stay absent.
struct MetricReport {
  std::optional<double> em_recall;
  std::optional<double> claim_recall;
  std::optional<double> citation_recall;
  std::optional<double> citation_precision;
  std::optional<double> citation_f1;

  bool operator==(const MetricReport&) const = default;
};

/// Fills citation_f1 from recall and precision when both are present.
MetricReport make_report(std::optional<double> em_recall, std::optional<double> claim_recall,
                         std::optional<double> citation_recall, std::optional<double> citation_precision);

}  // namespace citecheck::metrics
