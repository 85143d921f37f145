#include "citecheck/textproc.hpp"

#include <algorithm>
#include <cctype>
#include <climits>
#include <string>

namespace citecheck {
namespace {

constexpr std::size_t npos = std::string_view::npos;

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }
bool is_alpha(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }
bool is_terminator(char c) { return c == '.' || c == '!' || c == '?'; }
bool is_closer(char c) { return c == '"' || c == '\'' || c == ')'; }
bool is_opener(char c) { return c == '"' || c == '\'' || c == '('; }

// Returns one past the closing bracket if a well-formed marker starts at pos.
std::size_t match_marker(std::string_view s, std::size_t pos) {
  if (pos >= s.size() || s[pos] != '[') return npos;
  std::size_t i = pos + 1;
  while (i < s.size() && is_digit(s[i])) ++i;
  if (i == pos + 1 || i >= s.size() || s[i] != ']') return npos;
  return i + 1;
}

long long parse_marker_index(std::string_view digits) {
  long long value = 0;
  for (char c : digits) {
    if (value > (LLONG_MAX - 9) / 10) return LLONG_MAX;
    value = value * 10 + (c - '0');
  }
  return value;
}

bool starts_sentence(std::string_view s, std::size_t p) {
  if (p >= s.size()) return false;
  if (is_upper(s[p])) return true;
  return is_opener(s[p]) && p + 1 < s.size() && is_upper(s[p + 1]);
}

// The whitespace-delimited token ending at the period at `dot`, with leading
// opening punctuation stripped and lower-cased.
std::string token_before(std::string_view s, std::size_t begin, std::size_t dot) {
  std::size_t b = dot;
  while (b > begin && !is_space(s[b - 1])) --b;
  while (b < dot && is_opener(s[b])) ++b;
  std::string token(s.substr(b, dot + 1 - b));
  std::transform(token.begin(), token.end(), token.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return token;
}

bool is_non_terminal_period(std::string_view s, std::size_t begin, std::size_t dot) {
  const std::string token = token_before(s, begin, dot);
  if (token.size() == 2 && is_alpha(token[0]) && std::isupper(static_cast<unsigned char>(s[dot - 1]))) {
    return true;  // initial such as "J."
  }
  const auto& abbrevs = abbreviation_list();
  return std::find(abbrevs.begin(), abbrevs.end(), token) != abbrevs.end();
}

}  // namespace

const std::vector<std::string>& abbreviation_list() {
  static const std::vector<std::string> list = {
      "dr.",   "mr.",   "mrs.",  "ms.",  "prof.", "sr.",  "jr.",  "st.",
      "mt.",   "vs.",   "etc.",  "e.g.", "i.e.",  "cf.",  "u.s.", "u.k.",
      "u.n.",  "inc.",  "ltd.",  "corp.", "co.",  "approx.", "fig.", "vol.",
      "gen.",  "gov.",  "sen.",  "rep.", "rev.",  "lt.",  "col.", "sgt.",
      "capt.",
  };
  return list;
}

std::string trim_copy(std::string_view text) {
  std::size_t b = 0;
  std::size_t e = text.size();
  while (b < e && is_space(text[b])) ++b;
  while (e > b && is_space(text[e - 1])) --e;
  return std::string(text.substr(b, e - b));
}

bool contains_citation_marker(std::string_view text) {
  for (std::size_t i = text.find('['); i != npos; i = text.find('[', i + 1)) {
    if (match_marker(text, i) != npos) return true;
  }
  return false;
}

std::vector<RawStatement> split_statements(std::string_view s) {
  std::vector<RawStatement> out;
  const std::size_t n = s.size();
  std::size_t start = 0;
  while (start < n && is_space(s[start])) ++start;

  std::size_t i = start;
  while (i < n) {
    const char c = s[i];
    if (!is_terminator(c)) {
      ++i;
      continue;
    }
    if (c == '.' && i > 0 && is_digit(s[i - 1]) && i + 1 < n && is_digit(s[i + 1])) {
      ++i;
      continue;
    }

    std::size_t j = i + 1;
    while (j < n && (is_terminator(s[j]) || is_closer(s[j]))) ++j;

    std::size_t end = j;
    bool has_markers = false;
    for (;;) {
      std::size_t p = end;
      while (p < n && is_space(s[p])) ++p;
      const std::size_t q = match_marker(s, p);
      if (q == npos) break;
      end = q;
      has_markers = true;
    }

    std::size_t next = end;
    while (next < n && is_space(s[next])) ++next;

    bool boundary = next == n || (next > end && starts_sentence(s, next));
    if (boundary && c == '.' && !has_markers && is_non_terminal_period(s, start, i)) {
      boundary = false;
    }

    if (!boundary) {
      i = j;
      continue;
    }
    out.push_back({std::string(s.substr(start, end - start)), start, end});
    start = next;
    i = next;
  }

  if (start < n) {
    std::size_t e = n;
    while (e > start && is_space(s[e - 1])) --e;
    if (e > start) out.push_back({std::string(s.substr(start, e - start)), start, e});
  }
  return out;
}

ExtractedCitations extract_citations(std::string_view s, int k) {
  ExtractedCitations result;
  std::string stripped;
  stripped.reserve(s.size());

  std::size_t i = 0;
  while (i < s.size()) {
    const std::size_t q = match_marker(s, i);
    if (q == npos) {
      stripped.push_back(s[i]);
      ++i;
      continue;
    }
    const long long index = parse_marker_index(s.substr(i + 1, q - i - 2));
    if (index >= 1 && index <= k) {
      result.citations.insert(static_cast<int>(index));
    } else {
      result.dropped.push_back(index);
    }
    i = q;
    if (i < s.size() && std::string_view(".,;:!?").find(s[i]) != npos) {
      while (!stripped.empty() && is_space(stripped.back())) stripped.pop_back();
    }
  }

  std::string collapsed;
  collapsed.reserve(stripped.size());
  bool pending_space = false;
  for (char c : stripped) {
    if (is_space(c)) {
      pending_space = !collapsed.empty();
      continue;
    }
    if (pending_space) collapsed.push_back(' ');
    pending_space = false;
    collapsed.push_back(c);
  }
  result.clean_text = std::move(collapsed);
  return result;
}

ExtractedCitations extract_citations(const RawStatement& raw, int k) {
  return extract_citations(raw.text, k);
}

CitationSet merge_citation_sets(std::span<const CitationSet> sets) {
  CitationSet merged;
  for (const auto& set : sets) {
    for (int index : set) merged.insert(index);
  }
  return merged;
}

std::string annotate_citation(std::string_view text, int passage_index) {
  if (contains_citation_marker(text)) {
    throw Error(ErrorCode::AlreadyAnnotated, "text already carries a citation marker: " + std::string(text));
  }
  if (passage_index < 1) {
    throw Error(ErrorCode::InvalidCitationIndex, "passage index must be >= 1, got " + std::to_string(passage_index));
  }
  std::string out(text);
  out += '[';
  out += std::to_string(passage_index);
  out += ']';
  return out;
}

}  // namespace citecheck
