#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "citecheck/core.hpp"

namespace citecheck {

enum class PromptKind { Initial, UtilityCheck, Evidence, Refine };

std::string_view to_string(PromptKind kind);

struct Prompt {
  PromptKind kind = PromptKind::Initial;
  std::string text;
};

struct FewShotExample {
  std::string question;
  PassageSet passages;
  std::string answer;  // with inline markers

  bool operator==(const FewShotExample&) const = default;
};

/// Throws MalformedRecord if the answer cites outside its own passages.
FewShotExample make_few_shot(std::string question, PassageSet passages, std::string answer);

/// Reads a few-shot file: {"version": 1, "examples": [{question, passages:
/// [{title, text}], answer}]}. A bare array of examples is accepted too.
std::vector<FewShotExample> load_few_shots(const std::filesystem::path& path);

/// The shipped demonstrations (two per task family).
std::filesystem::path default_few_shot_path(std::string_view family = "default");

/// The instruction paragraph that opens each template.
std::string_view instruction_text(PromptKind kind);

/// Answer-with-citations prompt over every passage, demonstrations first.
Prompt build_initial_prompt(const Query& query, const PassageSet& passages,
                            std::span<const FewShotExample> shots);

/// Yes/No usefulness check for a single passage.
Prompt build_utility_prompt(const Query& query, const Passage& passage);

/// Single-passage answer prompt. Only the passage text is shown, no title.
Prompt build_evidence_prompt(const Query& query, const Passage& passage);

/// Refinement prompt: all k documents as references, then each statement as
/// "{text} [i][j]". Throws NoStatements on an empty list.
Prompt build_refine_prompt(const Query& query, const PassageSet& passages,
                           std::span<const Statement> statements);

/// Looks at the first run of letters only: "yes" is true, "no" is false,
/// anything else raises UnparseableVerdict.
bool parse_yes_no(std::string_view response);

}  // namespace citecheck
