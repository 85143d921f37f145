#pragma once

#include <map>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "citecheck/core.hpp"
#include "citecheck/error.hpp"

// Exhaustive reference for citation recall and precision. It shares no code
// with the production metrics: entailment comes from a truth table keyed by
// passage bitmask, so each rule is evaluated directly over subsets.
namespace citecheck::testing {

/// entailed[statement][mask] for every non-empty mask over passages 1..k.
struct TruthTable {
  int k = 0;
  std::vector<std::map<unsigned, bool>> entailed;

  bool at(std::size_t statement, unsigned mask) const {
    if (mask == 0) return false;  // nothing cited, nothing entails
    const auto& row = entailed.at(statement);
    const auto it = row.find(mask);
    if (it == row.end()) {
      throw Error(ErrorCode::IncompleteTruthTable,
                  "no entry for statement " + std::to_string(statement) + " mask " + std::to_string(mask));
    }
    return it->second;
  }
};

struct OracleScores {
  double recall = 0;
  std::optional<double> precision;
};

inline unsigned mask_of(const CitationSet& citations) {
  unsigned mask = 0;
  for (int c : citations) mask |= 1u << (c - 1);
  return mask;
}

inline void require_complete(const TruthTable& table, std::size_t statements) {
  if (table.entailed.size() < statements) {
    throw Error(ErrorCode::IncompleteTruthTable, "table has fewer rows than statements");
  }
  const unsigned full = (1u << table.k) - 1;
  for (std::size_t s = 0; s < statements; ++s) {
    for (unsigned mask = 1; mask <= full; ++mask) table.at(s, mask);
  }
}

inline OracleScores brute_force_citation_oracle(std::span<const Statement> statements, const TruthTable& table) {
  require_complete(table, statements.size());
  int supported = 0;
  int precise = 0;
  int total = 0;
  for (std::size_t s = 0; s < statements.size(); ++s) {
    const unsigned cited = mask_of(statements[s].citations);
    const bool full = table.at(s, cited);
    if (full) ++supported;
    for (int bit = 0; bit < table.k; ++bit) {
      const unsigned one = 1u << bit;
      if ((cited & one) == 0) continue;
      ++total;
      if (!full) continue;
      const bool alone = table.at(s, one);
      const bool rest = table.at(s, cited & ~one);
      if (alone || !rest) ++precise;
    }
  }
  OracleScores scores;
  scores.recall = statements.empty() ? 0.0 : 100.0 * supported / static_cast<double>(statements.size());
  if (total > 0) scores.precision = 100.0 * precise / total;
  return scores;
}

inline TruthTable random_truth_table(std::mt19937& rng, int k, std::size_t statements, double p_true = 0.5) {
  std::bernoulli_distribution coin(p_true);
  TruthTable table{k, {}};
  const unsigned full = (1u << k) - 1;
  for (std::size_t s = 0; s < statements; ++s) {
    std::map<unsigned, bool> row;
    for (unsigned mask = 1; mask <= full; ++mask) row[mask] = coin(rng);
    table.entailed.push_back(std::move(row));
  }
  return table;
}

/// The premise production code is expected to send for a mask over the
/// synthetic passages "T{i}" / "body{i}", written out by hand.
inline std::string expected_premise(unsigned mask, int k) {
  std::string out;
  for (int i = 1; i <= k; ++i) {
    if ((mask >> (i - 1)) & 1u) {
      if (!out.empty()) out += '\n';
      out += "Title: T" + std::to_string(i) + ". body" + std::to_string(i);
    }
  }
  return out;
}

/// Inverse of expected_premise, for driving a FunctionVerifier from a table.
inline std::map<std::string, unsigned> premise_index(int k) {
  std::map<std::string, unsigned> index;
  for (unsigned mask = 1; mask < (1u << k); ++mask) index[expected_premise(mask, k)] = mask;
  return index;
}

}  // namespace citecheck::testing
