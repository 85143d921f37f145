#include "citecheck/prompts.hpp"

#include <cctype>
#include <fstream>

#include <json.hpp>

#include "citecheck/textproc.hpp"

namespace citecheck {
namespace {

constexpr std::string_view kInitialInstruction =
    "Instruction: Please refer to the information in the following passages to answer the question. "
    "When answering, ignore any irrelevant information from the passages, but retain all relevant details "
    "to provide a comprehensive and accurate response. Always cite for any factual claim. When citing "
    "several search results, use [1][2][3]. Cite at least one passage in each sentence.";

constexpr std::string_view kUtilityInstruction =
    "Instruction: Please refer to the information in the following passage to answer the question. "
    "You need to first determine whether the information in the passage is helpful for answering the "
    "question. If you believe the passage is helpful, output 'Yes'; otherwise, output 'No'. Do not output "
    "any additional content.";

constexpr std::string_view kEvidenceInstruction =
    "Instruction: Please refer to the information in the following passage to answer the question. "
    "When answering, ignore any irrelevant information from the passage, but retain all relevant details "
    "to provide a comprehensive and accurate response.";

constexpr std::string_view kRefineInstruction =
    "Instruction: Please answer the following question. I will provide you with some answer statements "
    "with citations, as well as their original references. You need to summarize these statements and "
    "merge their citations such as [1][2].";

constexpr std::string_view kBlock = "\n\n";

void append_documents(std::string& out, const PassageSet& passages) {
  for (const auto& p : passages) {
    out += kBlock;
    out += "Document: [";
    out += std::to_string(p.index);
    out += "](Title: ";
    out += p.title;
    out += "): ";
    out += p.text;
  }
}

void append_question(std::string& out, std::string_view question) {
  out += kBlock;
  out += "Question: ";
  out += question;
}

Prompt single_passage_prompt(PromptKind kind, const Query& query, const Passage& passage) {
  std::string out(instruction_text(kind));
  append_question(out, query.text);
  out += kBlock;
  out += "Passage: ";
  out += passage.text;
  out += kBlock;
  out += "Response:";
  return {kind, std::move(out)};
}

PassageSet passages_from_json(const nlohmann::json& docs) {
  std::vector<std::pair<std::string, std::string>> pairs;
  for (const auto& d : docs) {
    pairs.emplace_back(d.value("title", std::string{}), d.at("text").get<std::string>());
  }
  return validate_passage_set(pairs);
}

}  // namespace

std::string_view to_string(PromptKind kind) {
  switch (kind) {
    case PromptKind::Initial: return "initial";
    case PromptKind::UtilityCheck: return "utility_check";
    case PromptKind::Evidence: return "evidence";
    case PromptKind::Refine: return "refine";
  }
  return "unknown";
}

std::string_view instruction_text(PromptKind kind) {
  switch (kind) {
    case PromptKind::Initial: return kInitialInstruction;
    case PromptKind::UtilityCheck: return kUtilityInstruction;
    case PromptKind::Evidence: return kEvidenceInstruction;
    case PromptKind::Refine: return kRefineInstruction;
  }
  return {};
}

FewShotExample make_few_shot(std::string question, PassageSet passages, std::string answer) {
  for (const auto& raw : split_statements(answer)) {
    const auto extracted = extract_citations(raw, passages.k());
    if (!extracted.dropped.empty()) {
      throw Error(ErrorCode::MalformedRecord, "few-shot answer cites [" + std::to_string(extracted.dropped.front()) +
                                                  "] but has only " + std::to_string(passages.k()) + " passages");
    }
  }
  return FewShotExample{std::move(question), std::move(passages), std::move(answer)};
}

std::vector<FewShotExample> load_few_shots(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::FileNotFound, "few-shot file not found: " + path.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::MalformedRecord, path.string() + ": " + e.what());
  }
  const nlohmann::json& examples = doc.is_array() ? doc : doc.at("examples");
  std::vector<FewShotExample> shots;
  std::size_t position = 0;
  for (const auto& e : examples) {
    try {
      shots.push_back(make_few_shot(e.at("question").get<std::string>(), passages_from_json(e.at("passages")),
                                    e.at("answer").get<std::string>()));
    } catch (const nlohmann::json::exception& ex) {
      throw Error(ErrorCode::MalformedRecord,
                  path.string() + ": example " + std::to_string(position) + ": " + ex.what());
    }
    ++position;
  }
  return shots;
}

std::filesystem::path default_few_shot_path(std::string_view family) {
  return std::filesystem::path(CITECHECK_DATA_DIR) / "fewshot" / (std::string(family) + ".json");
}

Prompt build_initial_prompt(const Query& query, const PassageSet& passages,
                            std::span<const FewShotExample> shots) {
  std::string out(kInitialInstruction);
  for (const auto& shot : shots) {
    append_question(out, shot.question);
    append_documents(out, shot.passages);
    out += kBlock;
    out += "Answer: ";
    out += shot.answer;
  }
  append_question(out, query.text);
  append_documents(out, passages);
  out += kBlock;
  out += "Answer:";
  return {PromptKind::Initial, std::move(out)};
}

Prompt build_utility_prompt(const Query& query, const Passage& passage) {
  return single_passage_prompt(PromptKind::UtilityCheck, query, passage);
}

Prompt build_evidence_prompt(const Query& query, const Passage& passage) {
  return single_passage_prompt(PromptKind::Evidence, query, passage);
}

Prompt build_refine_prompt(const Query& query, const PassageSet& passages,
                           std::span<const Statement> statements) {
  if (statements.empty()) {
    throw Error(ErrorCode::NoStatements, "refinement needs at least one verified statement");
  }
  std::string out(kRefineInstruction);
  append_question(out, query.text);
  out += kBlock;
  out += "References:";
  append_documents(out, passages);
  out += kBlock;
  out += "Answer statements:";
  for (const auto& s : statements) {
    out += kBlock;
    out += s.text;
    if (!s.citations.empty()) {
      out += ' ';
      for (int index : s.citations) {
        out += '[';
        out += std::to_string(index);
        out += ']';
      }
    }
  }
  out += kBlock;
  out += "Your Answer:";
  return {PromptKind::Refine, std::move(out)};
}

bool parse_yes_no(std::string_view response) {
  std::size_t i = 0;
  while (i < response.size() && !std::isalpha(static_cast<unsigned char>(response[i]))) ++i;
  std::string token;
  while (i < response.size() && std::isalpha(static_cast<unsigned char>(response[i]))) {
    token.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(response[i]))));
    ++i;
  }
  if (token == "yes") return true;
  if (token == "no") return false;
  throw Error(ErrorCode::UnparseableVerdict, "expected Yes or No, got: " + std::string(response.substr(0, 80)));
}

}  // namespace citecheck
