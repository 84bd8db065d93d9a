#pragma once

// Comparison distances: the edit family and fixed-scale k-gram distances.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <vector>

#include "wad/strings.hpp"

namespace wad::baselines {

inline std::size_t levenshtein(const Str& s, const Str& t) {
  s.require_same_alphabet(t);
  const auto a = s.symbols();
  const auto b = t.symbols();
  std::vector<std::size_t> prev(b.size() + 1);
  std::vector<std::size_t> cur(b.size() + 1);
  std::iota(prev.begin(), prev.end(), std::size_t{0});
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

enum class DamerauVariant {
  unrestricted,           // true Damerau–Levenshtein (Lowrance–Wagner)
  optimal_string_alignment,  // no substring edited twice
};

inline std::size_t damerau_levenshtein(const Str& s, const Str& t,
                                       DamerauVariant variant = DamerauVariant::unrestricted) {
  s.require_same_alphabet(t);
  const auto a = s.symbols();
  const auto b = t.symbols();
  const std::size_t n = a.size();
  const std::size_t m = b.size();

  if (variant == DamerauVariant::optimal_string_alignment) {
    std::vector<std::vector<std::size_t>> d(n + 1, std::vector<std::size_t>(m + 1));
    for (std::size_t i = 0; i <= n; ++i) d[i][0] = i;
    for (std::size_t j = 0; j <= m; ++j) d[0][j] = j;
    for (std::size_t i = 1; i <= n; ++i) {
      for (std::size_t j = 1; j <= m; ++j) {
        const std::size_t cost = a[i - 1] == b[j - 1] ? 0 : 1;
        d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1, d[i - 1][j - 1] + cost});
        if (i > 1 && j > 1 && a[i - 1] == b[j - 2] && a[i - 2] == b[j - 1]) {
          d[i][j] = std::min(d[i][j], d[i - 2][j - 2] + 1);
        }
      }
    }
    return d[n][m];
  }

  // Lowrance–Wagner with a last-row-seen table per symbol; the matrix is
  // offset by one so row/column 0 hold the "infinite" border.
  const std::size_t inf = n + m;
  std::vector<std::size_t> last_row(s.alphabet().size(), 0);
  std::vector<std::vector<std::size_t>> d(n + 2, std::vector<std::size_t>(m + 2, 0));
  d[0][0] = inf;
  for (std::size_t i = 0; i <= n; ++i) {
    d[i + 1][0] = inf;
    d[i + 1][1] = i;
  }
  for (std::size_t j = 0; j <= m; ++j) {
    d[0][j + 1] = inf;
    d[1][j + 1] = j;
  }
  for (std::size_t i = 1; i <= n; ++i) {
    std::size_t last_match_col = 0;
    for (std::size_t j = 1; j <= m; ++j) {
      const std::size_t k = last_row[b[j - 1]];
      const std::size_t l = last_match_col;
      std::size_t cost = 1;
      if (a[i - 1] == b[j - 1]) {
        cost = 0;
        last_match_col = j;
      }
      d[i + 1][j + 1] = std::min({d[i][j] + cost, d[i + 1][j] + 1, d[i][j + 1] + 1,
                                  d[k][l] + (i - k - 1) + 1 + (j - l - 1)});
    }
    last_row[a[i - 1]] = i;
  }
  return d[n + 1][m + 1];
}

inline std::size_t longest_common_subsequence(const Str& s, const Str& t) {
  s.require_same_alphabet(t);
  const auto a = s.symbols();
  const auto b = t.symbols();
  std::vector<std::size_t> prev(b.size() + 1, 0);
  std::vector<std::size_t> cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

/// Insert/delete-only edit distance |S| + |T| − 2·LCS(S, T).
inline std::size_t lcs_distance(const Str& s, const Str& t) {
  return s.size() + t.size() - 2 * longest_common_subsequence(s, t);
}

/// θ_k(S, T): the angle between k-gram count vectors.
inline double kgram_angle(const Str& s, const Str& t, std::size_t k) {
  s.require_same_alphabet(t);
  return angle(ngram_counts(s, k), ngram_counts(t, k));
}

/// Square root of the base-2 Jensen–Shannon divergence between the empirical
/// k-gram distributions. 1 when exactly one side has no k-grams, 0 when neither does.
inline double kgram_js(const Str& s, const Str& t, std::size_t k) {
  s.require_same_alphabet(t);
  const auto u = ngram_counts(s, k);
  const auto v = ngram_counts(t, k);
  if (u.is_zero() && v.is_zero()) return 0.0;
  if (u.is_zero() || v.is_zero()) return 1.0;
  const double total_u = static_cast<double>(u.total());
  const double total_v = static_cast<double>(v.total());

  // p log2(p / m) summed over one side's support; m = (p + q) / 2.
  auto term = [](double p, double q) { return p * std::log2(2.0 * p / (p + q)); };
  double divergence = 0.0;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < u.distinct() || j < v.distinct()) {
    int order = 0;
    if (i == u.distinct()) {
      order = 1;
    } else if (j == v.distinct()) {
      order = -1;
    } else {
      const auto a = u.key(i);
      const auto b = v.key(j);
      if (std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end())) {
        order = -1;
      } else if (std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end())) {
        order = 1;
      }
    }
    if (order < 0) {
      divergence += term(static_cast<double>(u.count(i++)) / total_u, 0.0);
    } else if (order > 0) {
      divergence += term(static_cast<double>(v.count(j++)) / total_v, 0.0);
    } else {
      const double p = static_cast<double>(u.count(i++)) / total_u;
      const double q = static_cast<double>(v.count(j++)) / total_v;
      divergence += term(p, q) + term(q, p);
    }
  }
  return std::sqrt(std::clamp(divergence / 2.0, 0.0, 1.0));
}

}  // namespace wad::baselines
