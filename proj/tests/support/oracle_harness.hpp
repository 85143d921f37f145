#pragma once

#include <random>
#include <string>
#include <vector>

#include "citation_oracle.hpp"
#include "random_text.hpp"
#include "citecheck/metrics.hpp"
#include "citecheck/scripted_backends.hpp"

namespace citecheck::testing {

struct OracleInstance {
  int k = 0;
  std::vector<Statement> statements;
  TruthTable table;
};

/// k <= 5 passages, up to 6 statements, random citations (empty allowed),
/// random truth table.
inline OracleInstance random_oracle_instance(std::mt19937& rng) {
  OracleInstance inst;
  inst.k = std::uniform_int_distribution<int>(1, 5)(rng);
  const int n = std::uniform_int_distribution<int>(1, 6)(rng);
  for (int s = 0; s < n; ++s) {
    inst.statements.push_back(
        make_statement("Statement " + std::to_string(s) + ".", random_citations(rng, inst.k), Origin::initial_answer()));
  }
  const double bias = std::uniform_real_distribution<double>(0.1, 0.9)(rng);
  inst.table = random_truth_table(rng, inst.k, inst.statements.size(), bias);
  return inst;
}

/// A verifier that answers from the truth table, decoding the premise text
/// and the statement number back into table coordinates.
inline FunctionVerifier table_verifier(const OracleInstance& inst) {
  auto index = premise_index(inst.k);
  return FunctionVerifier([index, table = inst.table](const std::string& premise,
                                                      const std::string& hypothesis) -> EntailmentJudgement {
    const auto it = index.find(premise);
    if (it == index.end()) throw Error(ErrorCode::UnmatchedScript, "unexpected premise: " + premise);
    const std::size_t statement = std::stoul(hypothesis.substr(std::string("Statement ").size()));
    return table.at(statement, it->second);
  });
}

struct OracleComparison {
  OracleScores oracle;
  double recall = 0;
  std::optional<double> precision;
  std::optional<double> combined_precision;
  double combined_recall = 0;
  bool matches() const {
    return oracle.recall == recall && oracle.precision == precision && oracle.recall == combined_recall &&
           oracle.precision == combined_precision;
  }
};

inline OracleComparison compare_with_oracle(const OracleInstance& inst) {
  OracleComparison out;
  out.oracle = brute_force_citation_oracle(inst.statements, inst.table);
  const PassageSet passages = synthetic_passages(inst.k);
  auto verifier = table_verifier(inst);
  out.recall = metrics::citation_recall(inst.statements, passages, verifier);
  try {
    out.precision = metrics::citation_precision(inst.statements, passages, verifier);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NoCitations) throw;
  }
  const auto combined = metrics::citation_scores(inst.statements, passages, verifier);
  out.combined_recall = combined.recall;
  out.combined_precision = combined.precision;
  return out;
}

}  // namespace citecheck::testing
