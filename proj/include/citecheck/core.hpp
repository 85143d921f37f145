#pragma once

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "citecheck/error.hpp"

namespace citecheck {

struct Query {
  std::string id;
  std::string text;

  bool operator==(const Query&) const = default;
};

/// Throws EmptyQuery when the question is blank after trimming.
Query make_query(std::string id, std::string text);

/// A retrieved passage. `index` is the 1-based rank used by "[i]" markers.
struct Passage {
  int index = 0;
  std::string title;
  std::string text;

  bool operator==(const Passage&) const = default;
};

/// The ordered top-k passages of one query. Indices are exactly 1..k.
class PassageSet {
 public:
  PassageSet() = default;
  /// Validates that indices form 1..k in order and every text is non-blank.
  explicit PassageSet(std::vector<Passage> passages);

  int k() const noexcept { return static_cast<int>(passages_.size()); }
  bool empty() const noexcept { return passages_.empty(); }
  bool contains(int index) const noexcept { return index >= 1 && index <= k(); }

  /// 1-based access; throws InvalidCitationIndex when out of range.
  const Passage& at(int index) const;

  const std::vector<Passage>& passages() const noexcept { return passages_; }
  auto begin() const noexcept { return passages_.begin(); }
  auto end() const noexcept { return passages_.end(); }

  /// First `k` passages, renumbering is unnecessary since order is kept.
  PassageSet truncated(int k) const;

  bool operator==(const PassageSet&) const = default;

 private:
  std::vector<Passage> passages_;
};

/// Numbers (title, text) pairs 1..k in input order.
PassageSet validate_passage_set(const std::vector<std::pair<std::string, std::string>>& passages);

/// Sorted, duplicate-free set of 1-based passage indices.
class CitationSet {
 public:
  CitationSet() = default;
  CitationSet(std::initializer_list<int> indices);
  explicit CitationSet(std::vector<int> indices);

  void insert(int index);
  bool contains(int index) const noexcept;
  bool empty() const noexcept { return indices_.empty(); }
  std::size_t size() const noexcept { return indices_.size(); }
  const std::vector<int>& indices() const noexcept { return indices_; }
  auto begin() const noexcept { return indices_.begin(); }
  auto end() const noexcept { return indices_.end(); }

  bool valid_for(int k) const noexcept;
  bool is_subset_of(const CitationSet& other) const noexcept;

  bool operator==(const CitationSet&) const = default;

 private:
  std::vector<int> indices_;
};

struct EntailmentVerdict {
  bool supported = false;
  std::string premise_digest;

  bool operator==(const EntailmentVerdict&) const = default;
};

/// 64-bit FNV-1a of the text, as 16 lowercase hex digits.
std::string digest_text(std::string_view text);

enum class OriginKind { InitialAnswer, Evidence, Refined };

struct Origin {
  OriginKind kind = OriginKind::InitialAnswer;
  int passage_index = 0;  // set only for Evidence

  static Origin initial_answer() { return {OriginKind::InitialAnswer, 0}; }
  static Origin evidence(int passage_index) { return {OriginKind::Evidence, passage_index}; }
  static Origin refined() { return {OriginKind::Refined, 0}; }

  bool operator==(const Origin&) const = default;
};

struct Statement {
  std::string text;  // marker-free
  CitationSet citations;
  Origin origin;
  std::optional<EntailmentVerdict> verdict;

  bool operator==(const Statement&) const = default;
};

/// Builds a statement and enforces its invariants: the text carries no
/// citation marker, and an Evidence(i) statement cites exactly {i}.
Statement make_statement(std::string text, CitationSet citations, Origin origin,
                         std::optional<EntailmentVerdict> verdict = std::nullopt);

struct AttributedAnswer {
  std::vector<Statement> statements;
  std::string rendered;
  bool abstained = false;

  bool operator==(const AttributedAnswer&) const = default;
};

struct DecodingParams {
  double temperature = 0.0;  // greedy
  int max_new_tokens = 512;

  bool operator==(const DecodingParams&) const = default;
};

struct UtilityVerdict {
  int passage_index = 0;
  bool relevant = false;

  bool operator==(const UtilityVerdict&) const = default;
};

/// Each statement followed directly by its markers in ascending order,
/// statements joined by single spaces: "A.[1][2] B.".
/// Throws InvalidCitationIndex if a citation falls outside 1..k.
std::string render_answer(std::span<const Statement> statements, int k);

}  // namespace citecheck
