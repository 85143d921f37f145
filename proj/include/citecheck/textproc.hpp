#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "citecheck/core.hpp"

namespace citecheck {

/// One sentence of a source answer, markers still attached.
/// `start`/`end` are byte offsets into the source, half-open.
struct RawStatement {
  std::string text;
  std::size_t start = 0;
  std::size_t end = 0;

  bool operator==(const RawStatement&) const = default;
};

/// Rule-based sentence segmentation.
///
/// A sentence ends at a run of '.', '!' or '?' (plus closing quotes or
/// brackets) when the next non-space character is an ASCII uppercase letter,
/// optionally behind an opening quote or parenthesis, or the text ends.
/// Citation markers that follow the terminator, with or without spaces in
/// between, belong to the sentence they follow. A period does not end a
/// sentence when it sits inside a number ("3.5"), closes a token from
/// abbreviation_list(), or closes a single-letter initial ("J."), unless a
/// citation marker immediately follows it.
///
/// Leading markers at the start of the answer stay with the first sentence.
std::vector<RawStatement> split_statements(std::string_view answer_text);

/// Lower-case abbreviations (with their final period) that never end a sentence.
const std::vector<std::string>& abbreviation_list();

struct ExtractedCitations {
  std::string clean_text;
  CitationSet citations;
  std::vector<long long> dropped;  // out-of-range indices, in order of appearance

  bool operator==(const ExtractedCitations&) const = default;
};

/// Removes every `[digits]` marker, keeping in-range indices and reporting the
/// rest as dropped. Whitespace runs collapse to one space and a space left in
/// front of closing punctuation ("capital [1].") is removed. Anything that is
/// not a well-formed marker ("[1a]", "[ 2]") stays as literal text.
ExtractedCitations extract_citations(std::string_view text, int k);
ExtractedCitations extract_citations(const RawStatement& raw, int k);

CitationSet merge_citation_sets(std::span<const CitationSet> sets);

/// text + "[i]". Throws AlreadyAnnotated when text already holds a marker.
std::string annotate_citation(std::string_view text, int passage_index);

bool contains_citation_marker(std::string_view text);

std::string trim_copy(std::string_view text);

}  // namespace citecheck
