#pragma once

// Naive evaluation of θ_n and d_ρ from explicit n-gram count vectors. Slow on
// purpose; used as ground truth for the suffix-structure evaluator.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "wad/strings.hpp"

namespace wad::oracle {

inline constexpr std::size_t kDefaultLengthCap = 2000;

inline void check_length(const Str& s, const Str& t, std::size_t cap) {
  if (s.size() > cap || t.size() > cap) {
    throw Error("reference oracle input exceeds the length cap of " + std::to_string(cap));
  }
}

inline double naive_theta_n(const Str& s, const Str& t, std::size_t n, std::size_t cap = kDefaultLengthCap) {
  s.require_same_alphabet(t);
  check_length(s, t, cap);
  return angle(ngram_counts(s, n), ngram_counts(t, n));
}

/// θ_1..θ_L for L = max(|S|, |T|).
inline std::vector<double> naive_theta_all(const Str& s, const Str& t, std::size_t cap = kDefaultLengthCap) {
  s.require_same_alphabet(t);
  check_length(s, t, cap);
  const std::size_t longest = std::max(s.size(), t.size());
  std::vector<double> thetas(longest);
  for (std::size_t n = 1; n <= longest; ++n) thetas[n - 1] = angle(ngram_counts(s, n), ngram_counts(t, n));
  return thetas;
}

/// Σ_n ρ^n θ_n over the finitely many nonzero scales, for each ρ in `rhos`.
inline std::vector<double> naive_dist(const Str& s, const Str& t, std::span<const double> rhos,
                                      std::size_t cap = kDefaultLengthCap) {
  for (double rho : rhos) {
    if (!(rho > 0.0)) throw Error("rho must be positive");
  }
  const auto thetas = naive_theta_all(s, t, cap);
  std::vector<double> totals;
  for (double rho : rhos) {
    double total = 0.0;
    for (std::size_t n = 1; n <= thetas.size(); ++n) {
      total += std::pow(rho, static_cast<double>(n)) * thetas[n - 1];
    }
    totals.push_back(total);
  }
  return totals;
}

/// Σ_n ρ^n θ_n for a single ρ.
inline double naive_dist(const Str& s, const Str& t, double rho, std::size_t cap = kDefaultLengthCap) {
  return naive_dist(s, t, std::span<const double>(&rho, 1), cap).front();
}

/// Naive A_n(S), A_n(T), B_n(S,T) per scale, n = 1..max(|S|,|T|).
struct NaiveAggregates {
  std::vector<Count> a_s;
  std::vector<Count> a_t;
  std::vector<Count> b;
};

inline NaiveAggregates naive_aggregates(const Str& s, const Str& t, std::size_t cap = kDefaultLengthCap) {
  s.require_same_alphabet(t);
  check_length(s, t, cap);
  const std::size_t longest = std::max(s.size(), t.size());
  NaiveAggregates out;
  for (std::size_t n = 1; n <= longest; ++n) {
    const auto u = ngram_counts(s, n);
    const auto v = ngram_counts(t, n);
    out.a_s.push_back(u.norm_squared());
    out.a_t.push_back(v.norm_squared());
    out.b.push_back(u.dot(v));
  }
  return out;
}

}  // namespace wad::oracle
