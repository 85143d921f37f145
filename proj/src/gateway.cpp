#include "citecheck/gateway.hpp"

#include <algorithm>
#include <tuple>

#include "citecheck/textproc.hpp"

namespace citecheck {

std::string GeneratorBackend::generate(const std::string& prompt, const DecodingParams& params) {
  if (trim_copy(prompt).empty()) {
    throw Error(ErrorCode::EmptyPrompt, "generation requested with an empty prompt");
  }
  std::string text = trim_copy(complete(prompt, params));
  if (text.empty()) {
    throw Error(ErrorCode::BackendRefusal, "backend returned an empty completion");
  }
  return text;
}

std::string truncate_premise(std::string_view premise, std::string_view hypothesis, std::size_t budget) {
  if (premise.size() + hypothesis.size() <= budget) return std::string(premise);
  std::size_t keep = budget > hypothesis.size() ? budget - hypothesis.size() : 0;
  // Do not split a multi-byte sequence.
  while (keep > 0 && keep < premise.size() &&
         (static_cast<unsigned char>(premise[keep]) & 0xC0) == 0x80) {
    --keep;
  }
  return std::string(premise.substr(0, keep));
}

EntailmentVerdict VerifierBackend::check_entailment(std::string_view premise, std::string_view hypothesis) {
  if (trim_copy(hypothesis).empty()) {
    throw Error(ErrorCode::EmptyHypothesis, "entailment check needs a hypothesis");
  }
  std::string used = truncate_premise(premise, hypothesis, options_.char_budget);
  EntailmentVerdict verdict;
  verdict.premise_digest = digest_text(used);
  if (trim_copy(used).empty()) {
    verdict.supported = false;
    return verdict;
  }
  const EntailmentJudgement judgement = judge(used, std::string(hypothesis));
  if (const bool* label = std::get_if<bool>(&judgement)) {
    verdict.supported = *label;
  } else {
    verdict.supported = std::get<double>(judgement) >= options_.threshold;
  }
  return verdict;
}

std::string concat_premise(std::vector<Passage> passages) {
  std::sort(passages.begin(), passages.end(), [](const Passage& a, const Passage& b) {
    return std::tie(a.index, a.title, a.text) < std::tie(b.index, b.title, b.text);
  });
  std::string out;
  for (const auto& p : passages) {
    if (!out.empty()) out += '\n';
    out += "Title: ";
    out += p.title;
    out += ". ";
    out += p.text;
  }
  return out;
}

std::string concat_premise(const PassageSet& passages, const CitationSet& citations) {
  std::vector<Passage> cited;
  cited.reserve(citations.size());
  for (int index : citations) cited.push_back(passages.at(index));
  return concat_premise(std::move(cited));
}

}  // namespace citecheck
