#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include "wad/strings.hpp"
#include "wad/suffix_engine.hpp"

namespace wad {

enum class TailPolicy {
  // Every scale is evaluated; max_n is ignored.
  exact,
  // Scales above max_n are bounded: the result is [partial, partial + tail].
  bounded_interval,
};

struct DistanceOptions {
  double rho = 0.5;
  std::optional<std::size_t> max_n;
  TailPolicy tail_policy = TailPolicy::bounded_interval;

  static DistanceOptions exact(double rho) { return {rho, std::nullopt, TailPolicy::exact}; }
  static DistanceOptions truncated(double rho, std::size_t max_n) {
    return {rho, max_n, TailPolicy::bounded_interval};
  }

  void validate() const {
    if (!(rho > 0.0) || !std::isfinite(rho)) throw Error("rho must be a positive finite number");
    if (max_n) {
      if (*max_n == 0) throw Error("max_n must be positive");
      if (rho >= 1.0) throw Error("truncation requires rho < 1: no geometric tail bound exists for rho >= 1");
    }
  }

  bool truncates() const noexcept { return max_n.has_value() && tail_policy == TailPolicy::bounded_interval; }
};

/// A distance value, or an interval [lo, hi] when scales were truncated.
struct DistanceInterval {
  double lo = 0.0;
  double hi = 0.0;

  bool is_point() const noexcept { return lo == hi; }
  double width() const noexcept { return hi - lo; }
};

/// θ_n from the aggregates: 0 when both norms vanish, π/2 when one does.
inline double theta_from_stats(const AggregatedStats& stats, std::size_t n) {
  if (n == 0) throw Error("scale must be positive");
  if (n > stats.max_length()) return 0.0;
  return angle_from_products(stats.b(n), stats.a_s(n), stats.a_t(n));
}

/// (π/2) Σ_{k=1}^{len} ρ^k, the distance from a string of length `len` to ε.
inline double dist_to_empty_length(std::size_t len, double rho) {
  if (!(rho > 0.0)) throw Error("rho must be positive");
  if (len == 0) return 0.0;
  if (rho == 1.0) return kHalfPi * static_cast<double>(len);
  return kHalfPi * rho * (1.0 - std::pow(rho, static_cast<double>(len))) / (1.0 - rho);
}

inline double dist_to_empty(const Str& s, double rho) { return dist_to_empty_length(s.size(), rho); }

/// Inverts dist_to_empty: the length of S given d_ρ(S, ε).
inline std::size_t recover_length(double d, double rho) {
  if (!(rho > 0.0)) throw Error("rho must be positive");
  if (!(d >= 0.0) || !std::isfinite(d)) throw Error("distance to the empty string must be finite and nonnegative");
  if (rho < 1.0 && d >= kHalfPi * rho / (1.0 - rho)) {
    throw Error("distance exceeds the supremum (pi/2)rho/(1-rho) attainable for this rho");
  }
  double estimate = 0.0;
  if (rho == 1.0) {
    estimate = 2.0 * d / std::numbers::pi;
  } else {
    estimate = std::log(1.0 - 2.0 * (1.0 - rho) * d / (std::numbers::pi * rho)) / std::log(rho);
  }
  const double rounded = std::round(estimate);
  if (std::abs(estimate - rounded) > 1e-6 * std::max(1.0, rounded)) {
    throw Error("value is not a distance to the empty string for this rho");
  }
  return static_cast<std::size_t>(rounded);
}

/// θ_1..θ_L for L = max(|S|, |T|) via the generalized suffix structure.
inline std::vector<double> theta_all(const Str& s, const Str& t) {
  s.require_same_alphabet(t);
  const std::size_t longest = std::max(s.size(), t.size());
  if (s.empty() || t.empty()) return std::vector<double>(longest, kHalfPi);
  const auto stats = aggregate(GeneralizedSuffixStructure::build(s, t));
  std::vector<double> thetas(longest);
  for (std::size_t n = 1; n <= longest; ++n) thetas[n - 1] = theta_from_stats(stats, n);
  return thetas;
}

/// Σ_n ρ^n θ_n over precomputed angles, optionally truncated per `opts`.
inline DistanceInterval weighted_sum(std::span<const double> thetas, const DistanceOptions& opts) {
  opts.validate();
  std::size_t last = thetas.size();
  const bool truncated = opts.truncates() && *opts.max_n < thetas.size();
  if (truncated) last = *opts.max_n;
  double total = 0.0;
  double weight = 1.0;
  for (std::size_t n = 1; n <= last; ++n) {
    weight *= opts.rho;
    total += weight * thetas[n - 1];
  }
  if (!truncated) return {total, total};
  const double tail = kHalfPi * std::pow(opts.rho, static_cast<double>(*opts.max_n + 1)) / (1.0 - opts.rho);
  return {total, total + tail};
}

/// d_ρ(S, T). Exact unless `opts` truncates and a string is longer than max_n.
inline DistanceInterval dist(const Str& s, const Str& t, const DistanceOptions& opts) {
  opts.validate();
  s.require_same_alphabet(t);
  if ((s.empty() || t.empty()) && !opts.truncates()) {
    const double d = dist_to_empty_length(std::max(s.size(), t.size()), opts.rho);
    return {d, d};
  }
  const auto thetas = theta_all(s, t);
  return weighted_sum(thetas, opts);
}

/// Exact d_ρ(S, T).
inline double dist(const Str& s, const Str& t, double rho) { return dist(s, t, DistanceOptions::exact(rho)).lo; }

}  // namespace wad
