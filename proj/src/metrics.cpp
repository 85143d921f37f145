#include "citecheck/metrics.hpp"

#include <cctype>
#include <sstream>

namespace citecheck::metrics {
namespace {

struct StatementJudgement {
  bool supported = false;
  int precise = 0;
  int total = 0;
};

StatementJudgement judge_statement(const Statement& s, const PassageSet& passages, VerifierBackend& verifier,
                                   bool with_precision) {
  StatementJudgement j;
  j.total = static_cast<int>(s.citations.size());
  if (s.citations.empty()) return j;

  j.supported = verifier.check_entailment(concat_premise(passages, s.citations), s.text).supported;
  if (!with_precision || !j.supported) return j;
  if (s.citations.size() == 1) {
    // The lone passage is the full premise, and removing it leaves nothing.
    j.precise = 1;
    return j;
  }
  for (int c : s.citations) {
    if (verifier.check_entailment(concat_premise(passages, CitationSet{c}), s.text).supported) {
      ++j.precise;
      continue;
    }
    CitationSet rest;
    for (int other : s.citations) {
      if (other != c) rest.insert(other);
    }
    if (!verifier.check_entailment(concat_premise(passages, rest), s.text).supported) ++j.precise;
  }
  return j;
}

}  // namespace

std::string normalize_answer(std::string_view text) {
  std::string cleaned;
  cleaned.reserve(text.size());
  for (unsigned char c : text) {
    if (c < 0x80 && std::ispunct(c)) continue;
    cleaned.push_back(c < 0x80 ? static_cast<char>(std::tolower(c)) : static_cast<char>(c));
  }
  std::istringstream words(cleaned);
  std::string out;
  std::string word;
  while (words >> word) {
    if (word == "a" || word == "an" || word == "the") continue;
    if (!out.empty()) out += ' ';
    out += word;
  }
  return out;
}

double em_recall(std::string_view answer_text, const std::vector<std::vector<std::string>>& gold) {
  if (gold.empty()) throw Error(ErrorCode::EmptyGold, "EM recall needs at least one gold alias set");
  const std::string answer = normalize_answer(answer_text);
  int hits = 0;
  for (const auto& aliases : gold) {
    for (const auto& alias : aliases) {
      const std::string norm = normalize_answer(alias);
      if (!norm.empty() && answer.find(norm) != std::string::npos) {
        ++hits;
        break;
      }
    }
  }
  return 100.0 * hits / static_cast<double>(gold.size());
}

double claim_recall(std::string_view answer_text, std::span<const std::string> claims, VerifierBackend& verifier) {
  if (claims.empty()) throw Error(ErrorCode::EmptyGold, "claim recall needs at least one claim");
  int entailed = 0;
  for (const auto& claim : claims) {
    if (verifier.check_entailment(answer_text, claim).supported) ++entailed;
  }
  return 100.0 * entailed / static_cast<double>(claims.size());
}

CitationScores citation_scores(std::span<const Statement> statements, const PassageSet& passages,
                               VerifierBackend& verifier) {
  if (statements.empty()) throw Error(ErrorCode::EmptyAnswer, "citation metrics need at least one statement");
  int supported = 0;
  int precise = 0;
  int total = 0;
  for (const auto& s : statements) {
    const StatementJudgement j = judge_statement(s, passages, verifier, true);
    supported += j.supported ? 1 : 0;
    precise += j.precise;
    total += j.total;
  }
  CitationScores scores;
  scores.recall = 100.0 * supported / static_cast<double>(statements.size());
  if (total > 0) scores.precision = 100.0 * precise / static_cast<double>(total);
  return scores;
}

double citation_recall(std::span<const Statement> statements, const PassageSet& passages, VerifierBackend& verifier) {
  if (statements.empty()) throw Error(ErrorCode::EmptyAnswer, "citation recall needs at least one statement");
  int supported = 0;
  for (const auto& s : statements) {
    if (judge_statement(s, passages, verifier, false).supported) ++supported;
  }
  return 100.0 * supported / static_cast<double>(statements.size());
}

double citation_precision(std::span<const Statement> statements, const PassageSet& passages,
                          VerifierBackend& verifier) {
  int precise = 0;
  int total = 0;
  for (const auto& s : statements) {
    const StatementJudgement j = judge_statement(s, passages, verifier, true);
    precise += j.precise;
    total += j.total;
  }
  if (total == 0) throw Error(ErrorCode::NoCitations, "citation precision is undefined without citations");
  return 100.0 * precise / static_cast<double>(total);
}

double f1(double recall, double precision) {
  if (recall + precision == 0) return 0;
  return 2 * recall * precision / (recall + precision);
}

MetricReport make_report(std::optional<double> em, std::optional<double> claim, std::optional<double> recall,
                         std::optional<double> precision) {
  MetricReport report{em, claim, recall, precision, std::nullopt};
  if (recall && precision) report.citation_f1 = f1(*recall, *precision);
  return report;
}

}  // namespace citecheck::metrics
