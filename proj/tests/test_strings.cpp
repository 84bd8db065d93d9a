#include <gtest/gtest.h>

#include <random>

#include "wad/strings.hpp"

using namespace wad;

namespace {

AlphabetPtr abc() {
  static const auto a = make_alphabet("abcx");
  return a;
}

Str S(std::string_view text) { return Str::parse(abc(), text); }

NGramVector vec(std::vector<std::pair<std::string, Count>> entries) {
  std::vector<std::pair<std::vector<Rank>, Count>> coded;
  std::size_t scale = entries.front().first.size();
  for (auto& [text, c] : entries) coded.emplace_back(abc()->encode(text), c);
  return NGramVector::from_entries(scale, std::move(coded));
}

NGramVector random_vector(std::mt19937_64& rng, std::size_t scale) {
  std::vector<std::pair<std::vector<Rank>, Count>> entries;
  std::uniform_int_distribution<Count> count(0, 6);
  for (Rank a = 0; a < 2; ++a) {
    for (Rank b = 0; b < 2; ++b) {
      const Count c = count(rng);
      if (c > 0) entries.push_back({{a, b}, c});
    }
  }
  return NGramVector::from_entries(scale, std::move(entries));
}

}  // namespace

TEST(Alphabet, ReservesTwoSentinelRanks) {
  const Alphabet a(3);
  EXPECT_EQ(a.separator_rank(), 3u);
  EXPECT_EQ(a.terminator_rank(), 4u);
  EXPECT_THROW(Alphabet(0), Error);
  EXPECT_THROW(Alphabet(std::vector<std::string>{"a", "a"}), Error);
}

TEST(Alphabet, MultiByteSymbols) {
  const auto greek = make_alphabet("αβ");
  const auto s = Str::parse(greek, "αββα");
  EXPECT_EQ(s.size(), 4u);
  EXPECT_EQ(s.text(), "αββα");
}

TEST(Str, RejectsForeignSymbols) {
  EXPECT_THROW(Str::parse(abc(), "abz"), Error);
  EXPECT_THROW(Str(make_alphabet(2), {0, 2}), Error);
  EXPECT_THROW(S("ab") + Str::parse(make_alphabet("xy"), "x"), Error);
}

TEST(Multiplicity, Examples) {
  EXPECT_EQ(multiplicity(S("abab"), S("ab")), 2u);
  EXPECT_EQ(multiplicity(S("abc"), S("x")), 0u);
  EXPECT_EQ(multiplicity(S("aaa"), S("aa")), 2u);
  EXPECT_EQ(multiplicity(S("abc"), S("")), 4u);
}

TEST(NGramCounts, Examples) {
  const auto v = ngram_counts(S("abab"), 2);
  EXPECT_EQ(v.distinct(), 2u);
  EXPECT_EQ(v.count_of(abc()->encode("ab")), 2u);
  EXPECT_EQ(v.count_of(abc()->encode("ba")), 1u);
  EXPECT_TRUE(ngram_counts(S("ab"), 3).is_zero());
  const auto a = ngram_counts(S("aaa"), 1);
  EXPECT_EQ(a.distinct(), 1u);
  EXPECT_EQ(a.count_of(abc()->encode("a")), 3u);
}

TEST(NGramCounts, AgreeWithMultiplicityAndSumToWindowCount) {
  std::mt19937_64 rng(11);
  for (int it = 0; it < 200; ++it) {
    std::vector<Rank> sym(rng() % 15);
    for (auto& r : sym) r = static_cast<Rank>(rng() % 3);
    const Str s(abc(), sym);
    for (std::size_t n = 1; n <= 6; ++n) {
      const auto v = ngram_counts(s, n);
      EXPECT_EQ(v.total(), s.size() >= n ? s.size() - n + 1 : 0);
      for (std::size_t i = 0; i < v.distinct(); ++i) {
        const auto key = v.key(i);
        EXPECT_EQ(v.count(i), multiplicity(s, Str(abc(), {key.begin(), key.end()})));
      }
    }
  }
}

TEST(Angle, Examples) {
  EXPECT_EQ(angle(vec({{"ab", 7}}), vec({{"ab", 7}})), 0.0);
  EXPECT_DOUBLE_EQ(angle(vec({{"ab", 1}}), vec({{"ba", 1}})), kHalfPi);
  // arccos(137 / (5 sqrt 761)), evaluated independently at 40 digits.
  EXPECT_NEAR(angle(vec({{"a", 4}, {"b", 3}}), vec({{"a", 20}, {"b", 19}})), 0.11626164608248644212, 1e-15);
}

TEST(Angle, ZeroVectorConventions) {
  const NGramVector zero(2);
  const auto u = vec({{"ab", 3}});
  EXPECT_EQ(angle(zero, zero), 0.0);
  EXPECT_EQ(angle(u, zero), kHalfPi);
  EXPECT_EQ(angle(zero, u), kHalfPi);
}

TEST(Angle, ScaleMismatchThrows) { EXPECT_THROW(angle(vec({{"a", 1}}), vec({{"ab", 1}})), Error); }

TEST(Angle, PseudometricProperties) {
  std::mt19937_64 rng(5);
  for (int it = 0; it < 2000; ++it) {
    const auto u = random_vector(rng, 2);
    const auto v = random_vector(rng, 2);
    const auto w = random_vector(rng, 2);
    EXPECT_EQ(angle(u, v), angle(v, u));
    if (!u.is_zero()) {
      EXPECT_EQ(angle(u, u), 0.0);
      EXPECT_EQ(angle(u.scaled(3), v), angle(u, v));
    }
    EXPECT_LE(angle(u, w), angle(u, v) + angle(v, w) + 1e-9);
  }
}
