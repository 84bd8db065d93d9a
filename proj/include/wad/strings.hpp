#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <numbers>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace wad {

using Rank = std::uint32_t;
using Count = std::uint64_t;

inline constexpr double kHalfPi = std::numbers::pi / 2.0;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Splits UTF-8 text into code points; invalid lead bytes are taken as single bytes.
inline std::vector<std::string> utf8_symbols(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    const auto lead = static_cast<unsigned char>(text[i]);
    std::size_t len = 1;
    if (lead >= 0xF0) {
      len = 4;
    } else if (lead >= 0xE0) {
      len = 3;
    } else if (lead >= 0xC0) {
      len = 2;
    }
    len = std::min(len, text.size() - i);
    out.emplace_back(text.substr(i, len));
    i += len;
  }
  return out;
}

/// Finite alphabet of `size()` symbols with ranks 0..size()-1.
///
/// Ranks `size()` and `size()+1` are reserved for the two sentinels used by the
/// generalized suffix structure and never appear in a `Str`.
class Alphabet {
 public:
  explicit Alphabet(std::size_t size) : size_(size) {
    if (size == 0) throw Error("alphabet must have at least one symbol");
  }

  explicit Alphabet(std::vector<std::string> names) : size_(names.size()), names_(std::move(names)) {
    if (size_ == 0) throw Error("alphabet must have at least one symbol");
    auto sorted = names_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw Error("alphabet symbols must be distinct");
    }
    for (const auto& name : names_) {
      if (name.empty()) throw Error("alphabet symbols must be nonempty");
    }
  }

  /// One symbol per UTF-8 code point of `symbols`, ranked in the given order.
  static Alphabet from_chars(std::string_view symbols) { return Alphabet(utf8_symbols(symbols)); }

  std::size_t size() const noexcept { return size_; }
  Rank separator_rank() const noexcept { return static_cast<Rank>(size_); }
  Rank terminator_rank() const noexcept { return static_cast<Rank>(size_ + 1); }
  bool has_names() const noexcept { return !names_.empty(); }

  std::string name(Rank r) const {
    if (r >= size_) throw Error("rank out of range for alphabet");
    if (names_.empty()) return "<" + std::to_string(r) + ">";
    return names_[r];
  }

  std::optional<Rank> rank_of(std::string_view symbol) const {
    for (std::size_t i = 0; i < names_.size(); ++i) {
      if (names_[i] == symbol) return static_cast<Rank>(i);
    }
    return std::nullopt;
  }

  std::vector<Rank> encode(std::string_view text) const {
    if (names_.empty()) throw Error("alphabet has no symbol names to encode text with");
    std::vector<Rank> ranks;
    for (const auto& sym : utf8_symbols(text)) {
      auto r = rank_of(sym);
      if (!r) throw Error("symbol '" + sym + "' is not in the alphabet");
      ranks.push_back(*r);
    }
    return ranks;
  }

  std::string decode(std::span<const Rank> ranks) const {
    std::string out;
    for (Rank r : ranks) out += name(r);
    return out;
  }

  friend bool operator==(const Alphabet&, const Alphabet&) = default;

 private:
  std::size_t size_;
  std::vector<std::string> names_;
};

using AlphabetPtr = std::shared_ptr<const Alphabet>;

inline AlphabetPtr make_alphabet(std::string_view symbols) {
  return std::make_shared<const Alphabet>(Alphabet::from_chars(symbols));
}

inline AlphabetPtr make_alphabet(std::size_t size) { return std::make_shared<const Alphabet>(size); }

/// A finite string over an alphabet, stored as symbol ranks. Empty means ε.
class Str {
 public:
  Str(AlphabetPtr alphabet, std::vector<Rank> symbols) : alphabet_(std::move(alphabet)), symbols_(std::move(symbols)) {
    if (!alphabet_) throw Error("string requires an alphabet");
    for (Rank r : symbols_) {
      if (r >= alphabet_->size()) throw Error("symbol rank outside the alphabet");
    }
  }

  static Str parse(AlphabetPtr alphabet, std::string_view text) {
    auto ranks = alphabet->encode(text);
    return Str(std::move(alphabet), std::move(ranks));
  }

  static Str empty(AlphabetPtr alphabet) { return Str(std::move(alphabet), {}); }

  const Alphabet& alphabet() const noexcept { return *alphabet_; }
  const AlphabetPtr& alphabet_ptr() const noexcept { return alphabet_; }
  std::span<const Rank> symbols() const noexcept { return symbols_; }
  std::size_t size() const noexcept { return symbols_.size(); }
  bool empty() const noexcept { return symbols_.empty(); }
  Rank operator[](std::size_t i) const { return symbols_[i]; }

  std::string text() const { return alphabet_->decode(symbols_); }

  bool same_alphabet(const Str& other) const noexcept {
    return alphabet_ == other.alphabet_ || *alphabet_ == *other.alphabet_;
  }

  Str operator+(const Str& other) const {
    require_same_alphabet(other);
    auto joined = symbols_;
    joined.insert(joined.end(), other.symbols_.begin(), other.symbols_.end());
    return Str(alphabet_, std::move(joined));
  }

  Str repeat(std::size_t times) const {
    std::vector<Rank> out;
    out.reserve(symbols_.size() * times);
    for (std::size_t i = 0; i < times; ++i) out.insert(out.end(), symbols_.begin(), symbols_.end());
    return Str(alphabet_, std::move(out));
  }

  Str reversed() const { return Str(alphabet_, {symbols_.rbegin(), symbols_.rend()}); }

  void require_same_alphabet(const Str& other) const {
    if (!same_alphabet(other)) throw Error("strings are over different alphabets");
  }

  friend bool operator==(const Str& a, const Str& b) { return a.same_alphabet(b) && a.symbols_ == b.symbols_; }

 private:
  AlphabetPtr alphabet_;
  std::vector<Rank> symbols_;
};

/// Number of split pairs (P1, P2) with S = P1 Q P2. For Q = ε this is |S|+1.
inline Count multiplicity(const Str& s, const Str& q) {
  s.require_same_alphabet(q);
  if (q.size() > s.size()) return 0;
  const auto hay = s.symbols();
  const auto needle = q.symbols();
  Count hits = 0;
  for (std::size_t i = 0; i + needle.size() <= hay.size(); ++i) {
    if (std::equal(needle.begin(), needle.end(), hay.begin() + static_cast<std::ptrdiff_t>(i))) ++hits;
  }
  return hits;
}

/// Sparse n-gram count vector ⟨S⟩_n: distinct length-n keys in lexicographic
/// rank order, each with a positive count.
class NGramVector {
 public:
  explicit NGramVector(std::size_t scale) : scale_(scale) {
    if (scale == 0) throw Error("n-gram scale must be positive");
  }

  /// Builds from (key, count) entries; keys must have length `scale`, counts of
  /// duplicate keys are added and zero counts dropped.
  static NGramVector from_entries(std::size_t scale, std::vector<std::pair<std::vector<Rank>, Count>> entries) {
    NGramVector v(scale);
    std::sort(entries.begin(), entries.end());
    for (auto& [key, count] : entries) {
      if (key.size() != scale) throw Error("n-gram key length does not match the scale");
      if (count == 0) continue;
      if (!v.counts_.empty() && std::equal(key.begin(), key.end(), v.keys_.end() - static_cast<std::ptrdiff_t>(scale))) {
        v.counts_.back() += count;
      } else {
        v.keys_.insert(v.keys_.end(), key.begin(), key.end());
        v.counts_.push_back(count);
      }
    }
    return v;
  }

  std::size_t scale() const noexcept { return scale_; }
  std::size_t distinct() const noexcept { return counts_.size(); }
  bool is_zero() const noexcept { return counts_.empty(); }

  std::span<const Rank> key(std::size_t i) const { return {keys_.data() + i * scale_, scale_}; }
  Count count(std::size_t i) const { return counts_[i]; }

  Count count_of(std::span<const Rank> gram) const {
    if (gram.size() != scale_) return 0;
    std::size_t lo = 0;
    std::size_t hi = counts_.size();
    while (lo < hi) {
      const std::size_t mid = (lo + hi) / 2;
      const auto k = key(mid);
      if (std::lexicographical_compare(k.begin(), k.end(), gram.begin(), gram.end())) {
        lo = mid + 1;
      } else {
        hi = mid;
      }
    }
    if (lo < counts_.size() && std::ranges::equal(key(lo), gram)) return counts_[lo];
    return 0;
  }

  Count total() const noexcept { return std::accumulate(counts_.begin(), counts_.end(), Count{0}); }

  Count norm_squared() const noexcept {
    Count acc = 0;
    for (Count c : counts_) acc += c * c;
    return acc;
  }

  Count dot(const NGramVector& other) const {
    if (other.scale_ != scale_) throw Error("n-gram vectors have different scales");
    Count acc = 0;
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < distinct() && j < other.distinct()) {
      const auto a = key(i);
      const auto b = other.key(j);
      if (std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end())) {
        ++i;
      } else if (std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end())) {
        ++j;
      } else {
        acc += counts_[i++] * other.counts_[j++];
      }
    }
    return acc;
  }

  NGramVector scaled(Count factor) const {
    NGramVector v = *this;
    if (factor == 0) {
      v.keys_.clear();
      v.counts_.clear();
    }
    for (auto& c : v.counts_) c *= factor;
    return v;
  }

  friend bool operator==(const NGramVector&, const NGramVector&) = default;

 private:
  friend NGramVector ngram_counts(const Str& s, std::size_t n);

  std::size_t scale_;
  std::vector<Rank> keys_;
  std::vector<Count> counts_;
};

/// ⟨S⟩_n by sorting window start positions and run-length grouping.
inline NGramVector ngram_counts(const Str& s, std::size_t n) {
  NGramVector v(n);
  if (n > s.size()) return v;
  const auto sym = s.symbols();
  const std::size_t windows = s.size() - n + 1;
  std::vector<std::size_t> starts(windows);
  std::iota(starts.begin(), starts.end(), std::size_t{0});
  auto window = [&](std::size_t i) { return sym.subspan(i, n); };
  std::sort(starts.begin(), starts.end(), [&](std::size_t a, std::size_t b) {
    const auto wa = window(a);
    const auto wb = window(b);
    return std::lexicographical_compare(wa.begin(), wa.end(), wb.begin(), wb.end());
  });
  for (std::size_t idx = 0; idx < windows; ++idx) {
    const auto w = window(starts[idx]);
    if (idx > 0 && std::ranges::equal(window(starts[idx - 1]), w)) {
      ++v.counts_.back();
    } else {
      v.keys_.insert(v.keys_.end(), w.begin(), w.end());
      v.counts_.push_back(1);
    }
  }
  return v;
}

/// Angle between two nonnegative integer vectors given u·v, ‖u‖² and ‖v‖².
///
/// Uses atan2 of the exact Gram determinant ‖u‖²‖v‖² − (u·v)² (Lagrange's
/// identity, computed in 128-bit integers), so parallel vectors give exactly 0
/// and near-parallel ones keep full relative accuracy. Equals the clamped
/// arccos of the cosine up to rounding.
inline double angle_from_products(Count dot, Count norm_sq_u, Count norm_sq_v) {
  if (norm_sq_u == 0 && norm_sq_v == 0) return 0.0;
  if (norm_sq_u == 0 || norm_sq_v == 0) return kHalfPi;
  using u128 = unsigned __int128;
  const u128 gram = static_cast<u128>(norm_sq_u) * norm_sq_v;
  const u128 dot_sq = static_cast<u128>(dot) * dot;
  const u128 cross_sq = gram > dot_sq ? gram - dot_sq : 0;
  if (cross_sq == 0) return 0.0;
  return static_cast<double>(
      std::atan2(std::sqrt(static_cast<long double>(cross_sq)), static_cast<long double>(dot)));
}

/// θ(u, v) in [0, π/2]; 0 if both vectors are zero, π/2 if exactly one is.
inline double angle(const NGramVector& u, const NGramVector& v) {
  if (u.scale() != v.scale()) throw Error("n-gram vectors have different scales");
  return angle_from_products(u.dot(v), u.norm_squared(), v.norm_squared());
}

}  // namespace wad
