#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <vector>

#include "wad/strings.hpp"
#include "wad/suffix_array.hpp"

namespace wad {

/// One node of the LCP-interval tree over U = S#T$. Internal nodes are
/// lcp-intervals [lb, rb] of the suffix array; leaves are single suffixes.
struct SuffixNode {
  std::int32_t lb = 0;
  std::int32_t rb = 0;
  std::int32_t depth = 0;
  std::int32_t parent_depth = 0;
  // Longest sentinel-free prefix of the path label, capped at `depth`.
  std::int32_t sentinel_free_depth = 0;
  std::uint32_t occ_s = 0;
  std::uint32_t occ_t = 0;
  bool leaf = false;

  std::int32_t min_scale() const noexcept { return parent_depth + 1; }
  std::int32_t max_scale() const noexcept { return sentinel_free_depth; }
};

/// Generalized suffix structure of S and T: suffix array, LCP array and the
/// LCP-interval tree of U = S # T $, with # < $ < every alphabet symbol.
class GeneralizedSuffixStructure {
 public:
  static GeneralizedSuffixStructure build(const Str& s, const Str& t) {
    s.require_same_alphabet(t);
    if (s.empty() || t.empty()) throw Error("generalized suffix structure needs two nonempty strings");
    const std::size_t total = s.size() + t.size() + 2;
    if (total > static_cast<std::size_t>(INT32_MAX)) throw Error("input too long for 32-bit suffix indices");

    GeneralizedSuffixStructure g;
    g.s_length_ = static_cast<std::int32_t>(s.size());
    g.t_length_ = static_cast<std::int32_t>(t.size());
    const Alphabet& alphabet = s.alphabet();

    g.text_.reserve(total);
    g.text_.insert(g.text_.end(), s.symbols().begin(), s.symbols().end());
    g.text_.push_back(alphabet.separator_rank());
    g.text_.insert(g.text_.end(), t.symbols().begin(), t.symbols().end());
    g.text_.push_back(alphabet.terminator_rank());

    // Sort key: # -> 0, $ -> 1, symbol r -> r + 2.
    const auto sigma = static_cast<Rank>(alphabet.size());
    std::vector<std::int32_t> codes(total);
    for (std::size_t i = 0; i < total; ++i) {
      const Rank r = g.text_[i];
      codes[i] = static_cast<std::int32_t>(r >= sigma ? r - sigma : r + 2);
    }
    g.sa_ = wad::suffix_array(codes, static_cast<std::int32_t>(sigma) + 1);
    g.lcp_ = lcp_kasai(codes, g.sa_);
    g.build_nodes();
    return g;
  }

  std::span<const Rank> text() const noexcept { return text_; }
  std::span<const std::int32_t> suffix_array() const noexcept { return sa_; }
  std::span<const std::int32_t> lcp() const noexcept { return lcp_; }
  std::span<const SuffixNode> nodes() const noexcept { return nodes_; }
  std::size_t s_length() const noexcept { return static_cast<std::size_t>(s_length_); }
  std::size_t t_length() const noexcept { return static_cast<std::size_t>(t_length_); }
  std::size_t max_length() const noexcept { return static_cast<std::size_t>(std::max(s_length_, t_length_)); }

  /// Path label of a node, truncated to its sentinel-free part.
  std::span<const Rank> sentinel_free_label(const SuffixNode& node) const {
    return std::span<const Rank>(text_).subspan(static_cast<std::size_t>(sa_[node.lb]),
                                                static_cast<std::size_t>(node.sentinel_free_depth));
  }

 private:
  // Distance from position p to the first sentinel at or after p.
  std::int32_t sentinel_distance(std::int32_t p) const noexcept {
    if (p <= s_length_) return s_length_ - p;
    return s_length_ + 1 + t_length_ - p;
  }

  void build_nodes() {
    const auto n = static_cast<std::int32_t>(sa_.size());
    // prefix counts of S-block and T-block suffix starts along the suffix array
    std::vector<std::uint32_t> pref_s(n + 1, 0);
    std::vector<std::uint32_t> pref_t(n + 1, 0);
    for (std::int32_t k = 0; k < n; ++k) {
      const std::int32_t p = sa_[k];
      pref_s[k + 1] = pref_s[k] + (p < s_length_ ? 1U : 0U);
      pref_t[k + 1] = pref_t[k] + (p > s_length_ && p < n - 1 ? 1U : 0U);
    }
    nodes_.reserve(2 * static_cast<std::size_t>(n));

    auto emit_internal = [&](std::int32_t depth, std::int32_t lb, std::int32_t rb, std::int32_t parent_depth) {
      SuffixNode node;
      node.lb = lb;
      node.rb = rb;
      node.depth = depth;
      node.parent_depth = parent_depth;
      node.sentinel_free_depth = std::min(depth, sentinel_distance(sa_[lb]));
      node.occ_s = pref_s[rb + 1] - pref_s[lb];
      node.occ_t = pref_t[rb + 1] - pref_t[lb];
      nodes_.push_back(node);
    };

    // Leaves: the parent is the deepest lcp-interval containing the suffix.
    for (std::int32_t k = 0; k < n; ++k) {
      const std::int32_t p = sa_[k];
      SuffixNode leaf;
      leaf.lb = k;
      leaf.rb = k;
      leaf.leaf = true;
      leaf.depth = n - p;
      leaf.parent_depth = std::max(lcp_[k], k + 1 < n ? lcp_[k + 1] : 0);
      leaf.sentinel_free_depth = std::min(leaf.depth, sentinel_distance(p));
      leaf.occ_s = pref_s[k + 1] - pref_s[k];
      leaf.occ_t = pref_t[k + 1] - pref_t[k];
      nodes_.push_back(leaf);
    }

    // Internal nodes: bottom-up stack sweep over the LCP array. The root
    // (lcp 0) is never emitted.
    struct Open {
      std::int32_t depth;
      std::int32_t lb;
    };
    std::vector<Open> stack{{0, 0}};
    for (std::int32_t i = 1; i <= n; ++i) {
      const std::int32_t h = i < n ? lcp_[i] : 0;
      std::int32_t lb = i - 1;
      while (h < stack.back().depth) {
        const Open top = stack.back();
        stack.pop_back();
        const std::int32_t parent_depth = std::max(h, stack.back().depth);
        emit_internal(top.depth, top.lb, i - 1, parent_depth);
        lb = top.lb;
      }
      if (h > stack.back().depth) stack.push_back({h, lb});
    }
  }

  std::int32_t s_length_ = 0;
  std::int32_t t_length_ = 0;
  std::vector<Rank> text_;
  std::vector<std::int32_t> sa_;
  std::vector<std::int32_t> lcp_;
  std::vector<SuffixNode> nodes_;
};

/// A_n(S) = ‖⟨S⟩_n‖², A_n(T) = ‖⟨T⟩_n‖², B_n = ⟨S⟩_n·⟨T⟩_n for n = 1..max_length.
class AggregatedStats {
 public:
  AggregatedStats() = default;
  AggregatedStats(std::vector<Count> a_s, std::vector<Count> a_t, std::vector<Count> b)
      : a_s_(std::move(a_s)), a_t_(std::move(a_t)), b_(std::move(b)) {
    if (a_s_.size() != a_t_.size() || a_s_.size() != b_.size()) throw Error("aggregate arrays differ in length");
  }

  std::size_t max_length() const noexcept { return a_s_.size(); }
  Count a_s(std::size_t n) const noexcept { return at(a_s_, n); }
  Count a_t(std::size_t n) const noexcept { return at(a_t_, n); }
  Count b(std::size_t n) const noexcept { return at(b_, n); }

  std::span<const Count> a_s_values() const noexcept { return a_s_; }
  std::span<const Count> a_t_values() const noexcept { return a_t_; }
  std::span<const Count> b_values() const noexcept { return b_; }

 private:
  static Count at(const std::vector<Count>& v, std::size_t n) noexcept {
    return n >= 1 && n <= v.size() ? v[n - 1] : 0;
  }

  std::vector<Count> a_s_;
  std::vector<Count> a_t_;
  std::vector<Count> b_;
};

/// Range-adds each node's (occ_S², occ_T², occ_S·occ_T) over its scale range
/// [parent_depth+1, sentinel_free_depth] into difference arrays, then prefix-sums.
inline AggregatedStats aggregate(const GeneralizedSuffixStructure& gss) {
  const std::size_t longest = gss.max_length();
  std::vector<std::int64_t> diff_s(longest + 2, 0);
  std::vector<std::int64_t> diff_t(longest + 2, 0);
  std::vector<std::int64_t> diff_st(longest + 2, 0);
  const auto limit = static_cast<std::int64_t>(longest + 1);

  for (const SuffixNode& node : gss.nodes()) {
    const std::int64_t lo = node.min_scale();
    const std::int64_t hi = node.max_scale();
    if (hi < lo || lo > limit) continue;
    const auto os = static_cast<std::int64_t>(node.occ_s);
    const auto ot = static_cast<std::int64_t>(node.occ_t);
    if (os == 0 && ot == 0) continue;
    diff_s[lo] += os * os;
    diff_t[lo] += ot * ot;
    diff_st[lo] += os * ot;
    if (hi + 1 <= limit) {
      diff_s[hi + 1] -= os * os;
      diff_t[hi + 1] -= ot * ot;
      diff_st[hi + 1] -= os * ot;
    }
  }

  std::vector<Count> a_s(longest);
  std::vector<Count> a_t(longest);
  std::vector<Count> b(longest);
  std::int64_t run_s = 0;
  std::int64_t run_t = 0;
  std::int64_t run_st = 0;
  for (std::size_t n = 1; n <= longest; ++n) {
    run_s += diff_s[n];
    run_t += diff_t[n];
    run_st += diff_st[n];
    a_s[n - 1] = static_cast<Count>(run_s);
    a_t[n - 1] = static_cast<Count>(run_t);
    b[n - 1] = static_cast<Count>(run_st);
  }
  return AggregatedStats(std::move(a_s), std::move(a_t), std::move(b));
}

}  // namespace wad
