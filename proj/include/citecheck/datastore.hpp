#pragma once

#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "citecheck/core.hpp"
#include "citecheck/pipeline.hpp"

namespace citecheck {

struct ShortAnswerGold {
  std::vector<std::vector<std::string>> alias_sets;
  bool operator==(const ShortAnswerGold&) const = default;
};

struct ClaimGold {
  std::vector<std::string> claims;
  bool operator==(const ClaimGold&) const = default;
};

/// Factoid datasets carry alias sets, long-form ones carry claims.
using GoldLabel = std::variant<ShortAnswerGold, ClaimGold>;

struct DatasetExample {
  Query query;
  PassageSet passages;
  GoldLabel gold;

  bool operator==(const DatasetExample&) const = default;
};

struct RecordError {
  std::size_t line_no = 0;  // 1-based
  std::string reason;
};

struct DatasetLoad {
  std::vector<DatasetExample> examples;
  std::size_t records_read = 0;
  std::size_t truncated = 0;  // records that had more than k passages
  std::vector<RecordError> errors;
};

/// Reads line-delimited JSON records
///   {"id", "question", "docs": [{"title", "text"}], "answers" | "claims"}
/// where "answers" is a list of alias lists (a plain string counts as a
/// single-alias set). Passages beyond `k` are cut. Bad records are reported
/// in `errors` and skipped; with `strict` the first one throws
/// MalformedRecord instead. Throws FileNotFound.
DatasetLoad load_dataset(const std::filesystem::path& path, int k = 5, bool strict = false);

/// Parses one dataset record. Throws MalformedRecord.
DatasetExample parse_dataset_record(const std::string& line, int k, bool* was_truncated = nullptr);
std::string dataset_record_to_json(const DatasetExample& example);

/// Appends one record as a single line and flushes. Throws IoError.
void append_run(const std::filesystem::path& path, const RunRecord& record);

struct RunLoad {
  std::vector<RunRecord> records;
  std::vector<RecordError> corrupt;
};

/// All parseable records in file order; unparseable lines land in
/// `corrupt`. Throws FileNotFound.
RunLoad load_runs(const std::filesystem::path& path);

}  // namespace citecheck
