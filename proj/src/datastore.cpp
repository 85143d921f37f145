#include "citecheck/datastore.hpp"

#include <fstream>

#include "citecheck/serialization.hpp"
#include "citecheck/textproc.hpp"

namespace citecheck {

using nlohmann::json;

namespace {

GoldLabel parse_gold(const json& j) {
  const bool has_answers = j.contains("answers");
  const bool has_claims = j.contains("claims");
  if (has_answers == has_claims) {
    throw Error(ErrorCode::MalformedRecord, "exactly one of 'answers' or 'claims' is required");
  }
  if (has_claims) {
    ClaimGold gold{j.at("claims").get<std::vector<std::string>>()};
    if (gold.claims.empty()) throw Error(ErrorCode::MalformedRecord, "'claims' is empty");
    return gold;
  }
  ShortAnswerGold gold;
  for (const auto& entry : j.at("answers")) {
    if (entry.is_string()) {
      gold.alias_sets.push_back({entry.get<std::string>()});
    } else {
      gold.alias_sets.push_back(entry.get<std::vector<std::string>>());
    }
    if (gold.alias_sets.back().empty()) throw Error(ErrorCode::MalformedRecord, "empty alias set in 'answers'");
  }
  if (gold.alias_sets.empty()) throw Error(ErrorCode::MalformedRecord, "'answers' is empty");
  return gold;
}

}  // namespace

DatasetExample parse_dataset_record(const std::string& line, int k, bool* was_truncated) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::MalformedRecord, std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw Error(ErrorCode::MalformedRecord, "record is not a JSON object");
  try {
    if (!j.contains("id")) throw Error(ErrorCode::MalformedRecord, "missing 'id'");
    if (!j.contains("question")) throw Error(ErrorCode::MalformedRecord, "missing 'question'");
    if (!j.contains("docs") || !j.at("docs").is_array()) {
      throw Error(ErrorCode::MalformedRecord, "missing 'docs' array");
    }
    std::string id = j.at("id").is_string() ? j.at("id").get<std::string>() : j.at("id").dump();
    std::string question = j.at("question").get<std::string>();
    if (trim_copy(question).empty()) throw Error(ErrorCode::MalformedRecord, "blank 'question'");

    const auto& docs = j.at("docs");
    if (docs.empty()) throw Error(ErrorCode::MalformedRecord, "record has no passages");
    std::vector<std::pair<std::string, std::string>> pairs;
    for (const auto& d : docs) {
      if (static_cast<int>(pairs.size()) == k) break;
      pairs.emplace_back(d.value("title", std::string{}), d.at("text").get<std::string>());
    }
    if (was_truncated != nullptr) *was_truncated = static_cast<int>(docs.size()) > k;

    PassageSet passages;
    try {
      passages = validate_passage_set(pairs);
    } catch (const Error& e) {
      throw Error(ErrorCode::MalformedRecord, e.what());
    }
    return DatasetExample{make_query(std::move(id), std::move(question)), std::move(passages), parse_gold(j)};
  } catch (const json::exception& e) {
    throw Error(ErrorCode::MalformedRecord, e.what());
  }
}

std::string dataset_record_to_json(const DatasetExample& example) {
  json docs = json::array();
  for (const auto& p : example.passages) docs.push_back({{"title", p.title}, {"text", p.text}});
  json j = {{"id", example.query.id}, {"question", example.query.text}, {"docs", docs}};
  if (const auto* s = std::get_if<ShortAnswerGold>(&example.gold)) {
    j["answers"] = s->alias_sets;
  } else {
    j["claims"] = std::get<ClaimGold>(example.gold).claims;
  }
  return j.dump();
}

DatasetLoad load_dataset(const std::filesystem::path& path, int k, bool strict) {
  if (k < 1) throw Error(ErrorCode::InvalidConfig, "k must be >= 1");
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::FileNotFound, "dataset not found: " + path.string());

  DatasetLoad load;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim_copy(line).empty()) continue;
    ++load.records_read;
    try {
      bool truncated = false;
      load.examples.push_back(parse_dataset_record(line, k, &truncated));
      if (truncated) ++load.truncated;
    } catch (const Error& e) {
      if (strict) {
        throw Error(ErrorCode::MalformedRecord, path.string() + ":" + std::to_string(line_no) + ": " + e.what());
      }
      load.errors.push_back({line_no, e.what()});
    }
  }
  return load;
}

void append_run(const std::filesystem::path& path, const RunRecord& record) {
  const std::string line = serialize_run(record);
  std::ofstream out(path, std::ios::app | std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot open run file for append: " + path.string());
  out << line << '\n';
  out.flush();
  if (!out) throw Error(ErrorCode::IoError, "write failed: " + path.string());
}

RunLoad load_runs(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::FileNotFound, "run file not found: " + path.string());
  RunLoad load;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim_copy(line).empty()) continue;
    try {
      load.records.push_back(json::parse(line).get<RunRecord>());
    } catch (const std::exception& e) {
      load.corrupt.push_back({line_no, e.what()});
    }
  }
  return load;
}

}  // namespace citecheck
