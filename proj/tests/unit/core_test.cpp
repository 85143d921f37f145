#include <random>

#include <gtest/gtest.h>

#include "random_text.hpp"
#include "citecheck/core.hpp"
#include "citecheck/textproc.hpp"

namespace citecheck {
namespace {

template <typename F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorCode::IoError;
}

TEST(PassageSetTest, NumbersPassagesInInputOrder) {
  const auto set = validate_passage_set({{"T1", "a"}, {"T2", "b"}});
  ASSERT_EQ(set.k(), 2);
  EXPECT_EQ(set.at(1).title, "T1");
  EXPECT_EQ(set.at(2).text, "b");
  EXPECT_EQ(set.at(2).index, 2);
}

TEST(PassageSetTest, FivePassagesGiveTopFive) {
  const auto set = validate_passage_set({{"a", "1"}, {"b", "2"}, {"c", "3"}, {"d", "4"}, {"e", "5"}});
  EXPECT_EQ(set.k(), 5);
  EXPECT_TRUE(set.contains(5));
  EXPECT_FALSE(set.contains(6));
  EXPECT_FALSE(set.contains(0));
}

TEST(PassageSetTest, RejectsEmptyListAndBlankText) {
  EXPECT_EQ(code_of([] { validate_passage_set({}); }), ErrorCode::EmptyPassageList);
  EXPECT_EQ(code_of([] { validate_passage_set({{"T", "ok"}, {"T", "  \n"}}); }), ErrorCode::EmptyPassageText);
}

TEST(PassageSetTest, RejectsGapsAndDuplicates) {
  EXPECT_THROW(PassageSet({{1, "a", "x"}, {3, "b", "y"}}), Error);
  EXPECT_THROW(PassageSet({{1, "a", "x"}, {1, "b", "y"}}), Error);
  EXPECT_THROW(PassageSet({{0, "a", "x"}}), Error);
}

TEST(PassageSetTest, AtOutOfRangeThrows) {
  const auto set = validate_passage_set({{"T1", "a"}});
  EXPECT_EQ(code_of([&] { set.at(2); }), ErrorCode::InvalidCitationIndex);
}

TEST(PassageSetTest, TruncatedKeepsPrefix) {
  const auto set = validate_passage_set({{"a", "1"}, {"b", "2"}, {"c", "3"}});
  const auto cut = set.truncated(2);
  EXPECT_EQ(cut.k(), 2);
  EXPECT_EQ(cut.at(2).title, "b");
  EXPECT_EQ(set.truncated(10), set);
}

TEST(QueryTest, BlankQuestionRejected) {
  EXPECT_EQ(code_of([] { make_query("q", " \t"); }), ErrorCode::EmptyQuery);
  EXPECT_EQ(make_query("q", "Why?").text, "Why?");
}

TEST(CitationSetTest, SortsAndDeduplicates) {
  const CitationSet set{3, 1, 3, 2};
  EXPECT_EQ(set.indices(), (std::vector<int>{1, 2, 3}));
  EXPECT_TRUE(set.valid_for(3));
  EXPECT_FALSE(set.valid_for(2));
  EXPECT_TRUE(CitationSet({1, 3}).is_subset_of(set));
  EXPECT_FALSE(CitationSet({4}).is_subset_of(set));
  EXPECT_THROW(CitationSet({0}), Error);
}

TEST(StatementTest, TextMustBeMarkerFree) {
  EXPECT_EQ(code_of([] { make_statement("X.[1]", {1}, Origin::initial_answer()); }), ErrorCode::AlreadyAnnotated);
  EXPECT_NO_THROW(make_statement("X [a].", {1}, Origin::initial_answer()));
}

TEST(StatementTest, EvidenceOriginCitesExactlyItsPassage) {
  EXPECT_NO_THROW(make_statement("E.", {2}, Origin::evidence(2)));
  EXPECT_THROW(make_statement("E.", {1, 2}, Origin::evidence(2)), Error);
  EXPECT_THROW(make_statement("E.", {}, Origin::evidence(2)), Error);
}

TEST(DigestTest, StableAndDistinct) {
  EXPECT_EQ(digest_text(""), "cbf29ce484222325");  // FNV-1a offset basis
  EXPECT_EQ(digest_text("a"), "af63dc4c8601ec8c");
  EXPECT_NE(digest_text("premise one"), digest_text("premise two"));
}

TEST(RenderTest, SingleStatement) {
  const std::vector<Statement> s{make_statement("Paris is the capital.", {1}, Origin::initial_answer())};
  EXPECT_EQ(render_answer(s, 5), "Paris is the capital.[1]");
}

TEST(RenderTest, SortedMarkersAndEmptySet) {
  const std::vector<Statement> s{make_statement("A.", {2, 1}, Origin::initial_answer()),
                                 make_statement("B.", {}, Origin::initial_answer())};
  EXPECT_EQ(render_answer(s, 5), "A.[1][2] B.");
}

TEST(RenderTest, OutOfRangeCitationRejected) {
  const std::vector<Statement> s{make_statement("A.", {4}, Origin::initial_answer())};
  EXPECT_EQ(code_of([&] { render_answer(s, 3); }), ErrorCode::InvalidCitationIndex);
}

TEST(RenderTest, RenderThenParseRoundTrips) {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> count(1, 10);
  std::uniform_int_distribution<int> kdist(1, 5);
  for (int trial = 0; trial < 300; ++trial) {
    const int k = kdist(rng);
    std::vector<Statement> statements;
    const int n = count(rng);
    for (int i = 0; i < n; ++i) {
      statements.push_back(make_statement(testing::random_sentence(rng), testing::random_citations(rng, k),
                                          Origin::initial_answer()));
    }
    const std::string rendered = render_answer(statements, k);
    const auto raws = split_statements(rendered);
    ASSERT_EQ(raws.size(), statements.size()) << rendered;
    for (std::size_t i = 0; i < raws.size(); ++i) {
      const auto parsed = extract_citations(raws[i], k);
      EXPECT_EQ(parsed.clean_text, statements[i].text) << rendered;
      EXPECT_EQ(parsed.citations, statements[i].citations) << rendered;
      EXPECT_TRUE(parsed.dropped.empty());
    }
  }
}

}  // namespace
}  // namespace citecheck
