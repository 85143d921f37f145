#pragma once

#include <array>
#include <random>
#include <string>
#include <vector>

#include "citecheck/core.hpp"

namespace citecheck::testing {

// Random marker-free sentences for round-trip properties. Every sentence
// starts with an uppercase letter and ends in a terminator; the last word
// is always a plain lower-case word so the sentence end is unambiguous.
// The interior mixes in abbreviations, initials, decimals and quotes.
inline std::string random_sentence(std::mt19937& rng) {
  static const std::array<const char*, 16> words = {
      "river", "city", "founded", "between", "ancient", "port", "harbor", "signal",
      "engine", "winter", "copper", "valley", "council", "treaty", "north", "garden"};
  static const std::array<const char*, 12> openers = {
      "The", "A", "Its", "Water", "Mayor", "Early", "Most", "Several", "Each", "Paris", "Dr. Smith", "J. Doe"};
  static const std::array<const char*, 11> extras = {
      "3.5", "1904", "e.g. the", "Dr. Jones", "U.S. troops", "approx. 12", "(in 1889)", "\"quoted\"",
      "i.e. the", "St. Louis", "[sic]"};
  static const std::array<const char*, 3> ends = {".", "!", "?"};

  auto pick = [&rng](const auto& list) {
    std::uniform_int_distribution<std::size_t> d(0, list.size() - 1);
    return std::string(list[d(rng)]);
  };
  std::uniform_int_distribution<int> count(1, 7);
  std::bernoulli_distribution extra(0.3);

  std::string s = pick(openers);
  const int n = count(rng);
  for (int i = 0; i < n; ++i) {
    s += ' ';
    s += extra(rng) ? pick(extras) : pick(words);
    if (extra(rng) && i + 1 < n) s += ',';
  }
  s += ' ';
  s += pick(words);
  s += pick(ends);
  return s;
}

inline CitationSet random_citations(std::mt19937& rng, int k, bool allow_empty = true) {
  std::uniform_int_distribution<int> bits(allow_empty ? 0 : 1, (1 << k) - 1);
  const int mask = bits(rng);
  CitationSet set;
  for (int i = 0; i < k; ++i) {
    if ((mask >> i) & 1) set.insert(i + 1);
  }
  return set;
}

inline PassageSet synthetic_passages(int k) {
  std::vector<Passage> passages;
  for (int i = 1; i <= k; ++i) {
    passages.push_back({i, "T" + std::to_string(i), "body" + std::to_string(i)});
  }
  return PassageSet(std::move(passages));
}

}  // namespace citecheck::testing
