#include <gtest/gtest.h>

#include <random>

#include "wad/completion.hpp"
#include "wad/oracle.hpp"

using namespace wad;
using namespace wad::completion;

namespace {

const AlphabetPtr& ab() {
  static const auto a = make_alphabet("ab");
  return a;
}

Str S(std::string_view text) { return Str::parse(ab(), text); }

Gram G(std::string_view text) { return ab()->encode(text); }

double tail_after(double rho, std::size_t depth) {
  return kHalfPi * std::pow(rho, static_cast<double>(depth + 1)) / (1.0 - rho);
}

Str random_string(std::mt19937_64& rng, const AlphabetPtr& a, std::size_t min_len, std::size_t max_len) {
  std::vector<Rank> sym(min_len + rng() % (max_len - min_len + 1));
  for (auto& r : sym) r = static_cast<Rank>(rng() % a->size());
  return Str(a, std::move(sym));
}

}  // namespace

TEST(FromPeriodic, Examples) {
  const auto m = from_periodic(S("ab"), 2);
  EXPECT_EQ(m.probability(G("a")), 0.5);
  EXPECT_EQ(m.probability(G("b")), 0.5);
  EXPECT_EQ(m.probability(G("ab")), 0.5);
  EXPECT_EQ(m.probability(G("ba")), 0.5);
  EXPECT_EQ(m.probability(G("aa")), 0.0);

  const auto a = from_periodic(S("a"), 3);
  for (std::size_t n = 1; n <= 3; ++n) {
    EXPECT_EQ(a.marginal(n).size(), 1u);
    EXPECT_EQ(a.probability(Gram(n, 0)), 1.0);
  }

  const auto aab = from_periodic(S("aab"), 2);
  EXPECT_EQ(aab.marginal(2).size(), 3u);
  EXPECT_DOUBLE_EQ(aab.probability(G("aa")), 1.0 / 3);
  EXPECT_DOUBLE_EQ(aab.probability(G("ab")), 1.0 / 3);
  EXPECT_DOUBLE_EQ(aab.probability(G("ba")), 1.0 / 3);
  EXPECT_THROW(from_periodic(S(""), 2), Error);
}

TEST(CheckConsistency, PeriodicSketchesAreExact) {
  for (const char* w : {"ab", "a", "aab", "abbab", "abaababaabaab"}) {
    const auto r = check_consistency(from_periodic(S(w), 6));
    EXPECT_TRUE(r.pass);
    EXPECT_EQ(r.worst_violation, 0.0);
  }
}

TEST(CheckConsistency, PerturbedMarginalFails) {
  std::vector<Marginal> m(2);
  m[0] = {{G("a"), 0.5}, {G("b"), 0.5}};
  m[1] = {{G("ab"), 0.6}, {G("ba"), 0.5}};
  const auto r = check_consistency(MeasureSketch(ab(), m));
  EXPECT_FALSE(r.pass);
  EXPECT_GE(r.worst_violation, 0.1 - 1e-12);
}

TEST(CheckConsistency, EmpiricalSketchViolationBound) {
  std::mt19937_64 rng(71);
  const std::size_t depth = 4;
  for (int it = 0; it < 100; ++it) {
    const auto s = random_string(rng, ab(), depth + 1, 80);
    const auto r = check_consistency(empirical_sketch(s, depth));
    EXPECT_LE(r.worst_violation, 1.0 / static_cast<double>(s.size() - depth + 1) + 1e-12);
  }
}

TEST(ExtendedDist, StringPairsAreExact) {
  const auto iv = extended_dist(S("abba"), S("ab"), 0.5);
  EXPECT_EQ(iv.lo, iv.hi);
  EXPECT_EQ(iv.lo, dist(S("abba"), S("ab"), 0.5));
}

TEST(ExtendedDist, IdenticalSketches) {
  const auto m = from_periodic(S("ab"), 5);
  const auto iv = extended_dist(m, m, 0.5);
  EXPECT_EQ(iv.lo, 0.0);
  EXPECT_NEAR(iv.hi, tail_after(0.5, 5), 1e-15);
}

TEST(ExtendedDist, PeriodicStringsConverge) {
  const auto m = from_periodic(S("ab"), 8);
  double previous = std::numeric_limits<double>::infinity();
  for (std::size_t k : {1, 4, 16, 64, 256}) {
    const auto iv = extended_dist(S("ab").repeat(k), m, 0.5);
    EXPECT_LE(iv.lo, iv.hi);
    EXPECT_LT(iv.lo, previous);
    previous = iv.lo;
  }
  EXPECT_LT(previous, 1e-3);
  EXPECT_LT(extended_dist(S("ab").repeat(512), m, 0.5).hi, 0.02);
}

TEST(ExtendedDist, MixedSeparation) {
  std::mt19937_64 rng(73);
  const auto m = from_periodic(S("aab"), 6);
  for (int it = 0; it < 100; ++it) {
    const auto s = random_string(rng, ab(), 0, 12);
    const double rho = 0.5;
    const auto iv = extended_dist(s, m, rho);
    // scales above |S| are π/2 each; only scales above the depth are unknown
    double certain = 0.0;
    for (std::size_t n = s.size() + 1; n <= 6; ++n) certain += kHalfPi * std::pow(rho, static_cast<double>(n));
    EXPECT_GE(iv.lo, certain - 1e-12);
    EXPECT_NEAR(iv.hi - iv.lo, s.size() >= 6 ? tail_after(rho, 6) - tail_after(rho, s.size()) : 0.0, 1e-12);
  }
}

TEST(ExtendedDist, RejectsRhoOutsideUnitInterval) {
  const auto m = from_periodic(S("ab"), 2);
  EXPECT_THROW(extended_dist(S("ab"), m, 1.0), Error);
  EXPECT_THROW(extended_dist(S("ab"), m, 0.0), Error);
}

TEST(Approximate, PeriodicSketches) {
  for (const char* w : {"ab", "aab", "abbab"}) {
    const auto m = from_periodic(S(w), 6);
    const auto result = approximate_measure_by_string(m, 0.05, 0.5);
    EXPECT_LT(result.upper_bound, 0.05);
    EXPECT_EQ(result.upper_bound, extended_dist(result.string, m, 0.5).hi);
    EXPECT_EQ(result.string, result.cycle_word.repeat(result.repetitions));
  }
}

TEST(Approximate, SingleLetter) {
  const auto a = make_alphabet("a");
  const auto m = from_periodic(Str::parse(a, "a"), 8);
  const auto result = approximate_measure_by_string(m, 0.05, 0.5);
  for (Rank r : result.string.symbols()) EXPECT_EQ(r, 0u);
  EXPECT_LT(result.upper_bound, 0.05);
}

TEST(Approximate, InfeasibleReportsBestBound) {
  const auto m = from_periodic(S("ab"), 3);
  try {
    approximate_measure_by_string(m, 0.01, 0.5);
    FAIL() << "expected InfeasibleError";
  } catch (const InfeasibleError& e) {
    EXPECT_GT(e.best_bound(), 0.01);
    EXPECT_GE(e.best_bound(), tail_after(0.5, 3));
  }
}

TEST(Approximate, NonPeriodicMixture) {
  // half the mass on the cycle "ab", half on "aab": consistent but not periodic
  const auto p = from_periodic(S("ab"), 6);
  const auto q = from_periodic(S("aab"), 6);
  std::vector<Marginal> mix(6);
  for (std::size_t n = 1; n <= 6; ++n) {
    for (const auto& [w, x] : p.marginal(n)) mix[n - 1][w] += 0.5 * x;
    for (const auto& [w, x] : q.marginal(n)) mix[n - 1][w] += 0.5 * x;
  }
  const MeasureSketch m(ab(), mix);
  ASSERT_TRUE(check_consistency(m).pass);
  const auto result = approximate_measure_by_string(m, 0.08, 0.5);
  EXPECT_LT(result.upper_bound, 0.08);
}

TEST(RecoverTheta, MatchesDirectTheta) {
  const DistanceOracle oracle = [](const Str& x, const Str& y) { return dist(x, y, 0.5); };
  EXPECT_NEAR(recover_theta(oracle, S("abab"), S("abba"), 1, 0.5), oracle::naive_theta_n(S("abab"), S("abba"), 1),
              1e-9);
  EXPECT_NEAR(recover_theta(oracle, S("abab"), S("abba"), 2, 0.5), oracle::naive_theta_n(S("abab"), S("abba"), 2),
              1e-9);
  EXPECT_NEAR(recover_theta(oracle, S("abba"), S("abba"), 2, 0.5), 0.0, 1e-9);
  EXPECT_NEAR(recover_theta(oracle, S("ab"), S("ba"), 2, 0.5), kHalfPi, 1e-9);
}

TEST(RecoverTheta, RandomPairs) {
  std::mt19937_64 rng(79);
  const auto a = make_alphabet(3);
  const DistanceOracle oracle = [](const Str& x, const Str& y) { return dist(x, y, 0.6); };
  for (int it = 0; it < 40; ++it) {
    const auto s = random_string(rng, a, 0, 10);
    const auto t = random_string(rng, a, 0, 10);
    for (std::size_t n = 1; n <= 3; ++n) {
      EXPECT_NEAR(recover_theta(oracle, s, t, n, 0.6), oracle::naive_theta_n(s, t, n), 1e-6);
    }
  }
}

TEST(RecoverTheta, Caps) {
  const DistanceOracle oracle = [](const Str& x, const Str& y) { return dist(x, y, 0.5); };
  EXPECT_THROW(recover_theta(oracle, S("ab"), S("ba"), 4, 0.5), Error);
  const auto big = make_alphabet(5);
  EXPECT_THROW(recover_theta(oracle, Str(big, {0}), Str(big, {1}), 1, 0.5), Error);
}

TEST(Serialization, GoldenAndRoundTrip) {
  const auto text = serialize_sketch(from_periodic(S("ab"), 2));
  EXPECT_EQ(text, "depth 2 alphabet 2\n1\ta\t0.5\n1\tb\t0.5\n2\tab\t0.5\n2\tba\t0.5\n");
  const auto m = from_periodic(S("abbab"), 5);
  const auto back = parse_sketch(serialize_sketch(m));
  EXPECT_EQ(back.depth(), m.depth());
  for (std::size_t n = 1; n <= m.depth(); ++n) EXPECT_EQ(back.marginal(n), m.marginal(n));
  EXPECT_EQ(serialize_sketch(back), serialize_sketch(m));
}

TEST(Serialization, RejectsMalformedInput) {
  EXPECT_THROW(parse_sketch(""), Error);
  EXPECT_THROW(parse_sketch("depth 2 alphabet 2\n1\ta\t1\n"), Error);
  EXPECT_THROW(parse_sketch("depth 1 alphabet 1\n1\ta\tx\n"), Error);
  EXPECT_THROW(parse_sketch("depth 1 alphabet 2\n1\ta\t0.5\n1\tb\t0.5\n2\tab\t1\n"), Error);
}
