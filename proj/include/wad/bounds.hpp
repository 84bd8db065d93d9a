#pragma once

// Closed-form stability bounds for d_ρ under single-symbol edits and stutter,
// plus the window counts they are built from.

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "wad/strings.hpp"

namespace wad::bounds {

inline void require_unit_rho(double rho) {
  if (!(rho > 0.0 && rho < 1.0)) throw Error("bound requires 0 < rho < 1");
}

/// A_M(ρ) = Σ_{k≥1} ρ^k min(k, M), in closed form.
inline double a_m_rho(std::uint64_t m, double rho) {
  require_unit_rho(rho);
  if (m == 0) throw Error("A_M(rho) requires M >= 1");
  const double md = static_cast<double>(m);
  const double rho_m = std::pow(rho, md);
  const double one_minus = 1.0 - rho;
  return rho * (1.0 - (md + 1.0) * rho_m + md * rho_m * rho) / (one_minus * one_minus) +
         md * rho_m * rho / one_minus;
}

struct EditBoundInputs {
  std::uint64_t m = 0;  // |P|
  std::uint64_t n = 0;  // |Q|
  double rho = 0.5;

  std::uint64_t length() const noexcept { return m + n; }
  std::uint64_t half_length() const noexcept { return length() / 2; }
  std::uint64_t overlap() const noexcept { return std::min(m + 1, n + 1); }
};

struct StutterBoundInputs {
  std::uint64_t m1 = 0;   // |P1|
  std::uint64_t n = 0;    // |Q|
  std::uint64_t m2 = 0;   // |P2|
  std::uint64_t ell = 1;  // repetition count of Q
  double rho = 0.5;

  std::uint64_t length() const noexcept { return m1 + n + m2; }
  std::uint64_t inserted() const noexcept { return (ell - 1) * n; }
  std::uint64_t half_length() const noexcept { return length() / 2; }
  std::uint64_t overlap() const noexcept { return std::min(m1 + n + 1, m2 + 1); }
};

namespace detail {

inline void check_edit(const EditBoundInputs& in) {
  require_unit_rho(in.rho);
  if (in.length() == 0) throw Error("edit bound is undefined when P and Q are both empty");
}

inline double geometric_tail(double rho, std::uint64_t first_exponent) {
  return std::pow(rho, static_cast<double>(first_exponent)) / (1.0 - rho);
}

}  // namespace detail

/// Upper bound on d_ρ(PaQ, PQ).
inline double insertion_bound(const EditBoundInputs& in) {
  detail::check_edit(in);
  const double len = static_cast<double>(in.length());
  return std::numbers::pi * std::sqrt(2.0) / std::sqrt(len) * a_m_rho(in.overlap(), in.rho) +
         kHalfPi * detail::geometric_tail(in.rho, in.half_length() + 1) +
         kHalfPi * std::pow(in.rho, len + 1.0);
}

/// Upper bound on d_ρ(PaQ, PbQ).
inline double substitution_bound(const EditBoundInputs& in) {
  detail::check_edit(in);
  const double len = static_cast<double>(in.length());
  return std::numbers::pi / std::sqrt(len) * a_m_rho(in.overlap(), in.rho) +
         kHalfPi * detail::geometric_tail(in.rho, in.half_length() + 1);
}

/// Upper bound on d_ρ(P1 Q P2, P1 Q^ℓ P2).
inline double stutter_bound(const StutterBoundInputs& in) {
  require_unit_rho(in.rho);
  if (in.length() == 0) throw Error("stutter bound requires |P1 Q P2| >= 1");
  if (in.ell == 0) throw Error("stutter repetition count must be positive");
  const double len = static_cast<double>(in.length());
  const double r = static_cast<double>(in.inserted());
  const double rho = in.rho;
  return std::numbers::pi / std::sqrt(2.0 * len) * (3.0 * a_m_rho(in.overlap(), rho) + rho / (1.0 - rho) * r) +
         kHalfPi * detail::geometric_tail(rho, in.half_length() + 1) +
         kHalfPi * std::pow(rho, len + 1.0) * (1.0 - std::pow(rho, r)) / (1.0 - rho);
}

enum class WindowKind {
  insert_c,   // windows of PQ crossing the P|Q junction
  insert_d,   // windows of PaQ containing the inserted symbol
  subst_e,    // windows of PaQ containing the substituted symbol
  stutter_c,  // windows of P1QP2 crossing the prefix|suffix junction
  stutter_d,  // windows of P1Q^ℓP2 meeting the inserted block
};

/// For insert/subst kinds: m = |P|, n = |Q|. For stutter kinds: p = |P1 Q|,
/// q = |P2|, r = (ℓ-1)|Q|.
struct WindowParams {
  std::int64_t m = 0;
  std::int64_t n = 0;
  std::int64_t p = 0;
  std::int64_t q = 0;
  std::int64_t r = 0;
  std::int64_t k = 1;
};

inline std::int64_t window_count(WindowKind kind, const WindowParams& w) {
  const std::int64_t k = w.k;
  std::int64_t raw = 0;
  switch (kind) {
    case WindowKind::insert_c:
      raw = std::min(w.m, k - 1) - std::max<std::int64_t>(1, k - w.n) + 1;
      break;
    case WindowKind::insert_d:
      raw = std::min(w.m, k - 1) - std::max<std::int64_t>(0, k - w.n - 1) + 1;
      break;
    case WindowKind::subst_e: {
      const std::int64_t len = w.m + w.n;
      raw = std::min(w.m, len - k + 1) - std::max<std::int64_t>(0, w.m - k + 1) + 1;
      break;
    }
    case WindowKind::stutter_c:
      raw = std::min(w.p, k - 1) - std::max<std::int64_t>(1, k - w.q) + 1;
      break;
    case WindowKind::stutter_d: {
      const std::int64_t len = w.p + w.q;
      raw = std::min(w.p + w.r, len + w.r - k + 1) - std::max<std::int64_t>(1, w.p - k + 2) + 1;
      break;
    }
  }
  return std::max<std::int64_t>(0, raw);
}

/// Every string within this distance of a string of length `s_length` equals it.
inline double min_separation(std::uint64_t s_length, double rho) {
  if (!(rho > 0.0)) throw Error("rho must be positive");
  const double len = static_cast<double>(s_length);
  return kHalfPi * std::min(std::pow(rho, len), std::pow(rho, len + 1.0));
}

/// sup d_ρ over all pairs, for ρ < 1.
inline double uniform_bound(double rho) {
  require_unit_rho(rho);
  return kHalfPi * rho / (1.0 - rho);
}

}  // namespace wad::bounds
