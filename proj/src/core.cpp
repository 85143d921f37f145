#include "citecheck/core.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdio>

#include "citecheck/textproc.hpp"

namespace citecheck {

Query make_query(std::string id, std::string text) {
  if (trim_copy(text).empty()) {
    throw Error(ErrorCode::EmptyQuery, "query '" + id + "' has no question text");
  }
  return Query{std::move(id), std::move(text)};
}

PassageSet::PassageSet(std::vector<Passage> passages) : passages_(std::move(passages)) {
  if (passages_.empty()) {
    throw Error(ErrorCode::EmptyPassageList, "a passage set needs at least one passage");
  }
  for (std::size_t i = 0; i < passages_.size(); ++i) {
    const auto& p = passages_[i];
    if (p.index != static_cast<int>(i) + 1) {
      throw Error(ErrorCode::InvalidCitationIndex,
                  "passage at position " + std::to_string(i) + " has index " + std::to_string(p.index) +
                      ", expected " + std::to_string(i + 1));
    }
    if (trim_copy(p.text).empty()) {
      throw Error(ErrorCode::EmptyPassageText, "passage " + std::to_string(p.index) + " has blank text");
    }
  }
}

const Passage& PassageSet::at(int index) const {
  if (!contains(index)) {
    throw Error(ErrorCode::InvalidCitationIndex,
                "passage index " + std::to_string(index) + " outside 1.." + std::to_string(k()));
  }
  return passages_[static_cast<std::size_t>(index - 1)];
}

PassageSet PassageSet::truncated(int k) const {
  if (k >= this->k()) return *this;
  return PassageSet(std::vector<Passage>(passages_.begin(), passages_.begin() + std::max(k, 0)));
}

PassageSet validate_passage_set(const std::vector<std::pair<std::string, std::string>>& passages) {
  std::vector<Passage> numbered;
  numbered.reserve(passages.size());
  int index = 1;
  for (const auto& [title, text] : passages) {
    numbered.push_back(Passage{index++, title, text});
  }
  return PassageSet(std::move(numbered));
}

CitationSet::CitationSet(std::initializer_list<int> indices) : CitationSet(std::vector<int>(indices)) {}

CitationSet::CitationSet(std::vector<int> indices) {
  for (int index : indices) insert(index);
}

void CitationSet::insert(int index) {
  if (index < 1) {
    throw Error(ErrorCode::InvalidCitationIndex, "citation index must be >= 1, got " + std::to_string(index));
  }
  auto it = std::lower_bound(indices_.begin(), indices_.end(), index);
  if (it == indices_.end() || *it != index) indices_.insert(it, index);
}

bool CitationSet::contains(int index) const noexcept {
  return std::binary_search(indices_.begin(), indices_.end(), index);
}

bool CitationSet::valid_for(int k) const noexcept {
  return indices_.empty() || (indices_.front() >= 1 && indices_.back() <= k);
}

bool CitationSet::is_subset_of(const CitationSet& other) const noexcept {
  return std::includes(other.indices_.begin(), other.indices_.end(), indices_.begin(), indices_.end());
}

std::string digest_text(std::string_view text) {
  std::uint64_t hash = 14695981039346656037ULL;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

Statement make_statement(std::string text, CitationSet citations, Origin origin,
                         std::optional<EntailmentVerdict> verdict) {
  if (contains_citation_marker(text)) {
    throw Error(ErrorCode::AlreadyAnnotated, "statement text must be marker-free: " + text);
  }
  if (origin.kind == OriginKind::Evidence && citations != CitationSet{origin.passage_index}) {
    throw Error(ErrorCode::InvalidCitationIndex,
                "evidence statement from passage " + std::to_string(origin.passage_index) +
                    " must cite exactly that passage");
  }
  return Statement{std::move(text), std::move(citations), origin, std::move(verdict)};
}

std::string render_answer(std::span<const Statement> statements, int k) {
  std::string out;
  for (const auto& s : statements) {
    if (!s.citations.valid_for(k)) {
      throw Error(ErrorCode::InvalidCitationIndex,
                  "statement '" + s.text + "' cites outside 1.." + std::to_string(k));
    }
    if (!out.empty()) out += ' ';
    out += s.text;
    for (int index : s.citations) {
      out += '[';
      out += std::to_string(index);
      out += ']';
    }
  }
  return out;
}

}  // namespace citecheck
