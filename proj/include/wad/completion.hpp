#pragma once

// Finite-depth view of the completion of (Σ*, d_ρ): shift-invariant measures
// represented by their cylinder marginals up to a depth N, the extended
// distance between strings and such sketches, construction of strings that
// approximate a sketch (circulation rounding, de Bruijn multigraph, Eulerian
// cycle), and recovery of θ_n from distance queries alone.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <queue>
#include <sstream>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <variant>
#include <vector>

#include "wad/metric.hpp"
#include "wad/strings.hpp"

namespace wad::completion {

using Gram = std::vector<Rank>;
/// Probability per length-n word; absent words have probability 0.
using Marginal = std::map<Gram, double>;

/// Cylinder marginals p_1..p_N of a shift-invariant measure.
class MeasureSketch {
 public:
  /// `exact_denominator` > 0 asserts every probability is an exact multiple of
  /// 1/exact_denominator, which lets consistency be checked in integers.
  MeasureSketch(AlphabetPtr alphabet, std::vector<Marginal> marginals, double consistency_tol = 1e-9,
                std::uint64_t exact_denominator = 0)
      : alphabet_(std::move(alphabet)),
        marginals_(std::move(marginals)),
        consistency_tol_(consistency_tol),
        exact_denominator_(exact_denominator) {
    if (!alphabet_) throw Error("sketch requires an alphabet");
    if (marginals_.empty()) throw Error("sketch depth must be positive");
    const double words = std::pow(static_cast<double>(alphabet_->size()), static_cast<double>(depth()));
    if (words > 4.0e18) throw Error("sketch depth too large for this alphabet");
    for (std::size_t n = 1; n <= depth(); ++n) {
      for (auto it = marginals_[n - 1].begin(); it != marginals_[n - 1].end();) {
        const auto& [gram, p] = *it;
        if (gram.size() != n) throw Error("marginal word length does not match its depth");
        for (Rank r : gram) {
          if (r >= alphabet_->size()) throw Error("marginal word uses a symbol outside the alphabet");
        }
        if (!(p >= 0.0) || !std::isfinite(p)) throw Error("marginal probabilities must be finite and nonnegative");
        it = p == 0.0 ? marginals_[n - 1].erase(it) : std::next(it);
      }
    }
  }

  const Alphabet& alphabet() const noexcept { return *alphabet_; }
  const AlphabetPtr& alphabet_ptr() const noexcept { return alphabet_; }
  std::size_t depth() const noexcept { return marginals_.size(); }
  double consistency_tol() const noexcept { return consistency_tol_; }
  std::uint64_t exact_denominator() const noexcept { return exact_denominator_; }

  const Marginal& marginal(std::size_t n) const {
    if (n == 0 || n > depth()) throw Error("marginal scale outside the sketch depth");
    return marginals_[n - 1];
  }

  double probability(const Gram& w) const {
    const auto& m = marginal(w.size());
    const auto it = m.find(w);
    return it == m.end() ? 0.0 : it->second;
  }

 private:
  AlphabetPtr alphabet_;
  std::vector<Marginal> marginals_;
  double consistency_tol_;
  std::uint64_t exact_denominator_;
};

/// p_n(W) = (cyclic occurrences of W in `word`) / |word|, n = 1..depth.
inline MeasureSketch from_periodic(const Str& word, std::size_t depth) {
  if (word.empty()) throw Error("periodic word must be nonempty");
  if (depth == 0) throw Error("sketch depth must be positive");
  const std::size_t len = word.size();
  std::vector<Marginal> marginals(depth);
  for (std::size_t n = 1; n <= depth; ++n) {
    std::map<Gram, std::uint64_t> counts;
    for (std::size_t i = 0; i < len; ++i) {
      Gram g(n);
      for (std::size_t j = 0; j < n; ++j) g[j] = word[(i + j) % len];
      ++counts[g];
    }
    for (const auto& [g, c] : counts) marginals[n - 1][g] = static_cast<double>(c) / static_cast<double>(len);
  }
  return MeasureSketch(word.alphabet_ptr(), std::move(marginals), 1e-12, len);
}

/// Empirical block distributions p_n^S of a finite string, n = 1..depth.
/// Scales longer than |S| have an empty marginal.
inline MeasureSketch empirical_sketch(const Str& s, std::size_t depth) {
  std::vector<Marginal> marginals(depth);
  for (std::size_t n = 1; n <= depth && n <= s.size(); ++n) {
    const auto counts = ngram_counts(s, n);
    const double windows = static_cast<double>(s.size() - n + 1);
    for (std::size_t i = 0; i < counts.distinct(); ++i) {
      const auto key = counts.key(i);
      marginals[n - 1][Gram(key.begin(), key.end())] = static_cast<double>(counts.count(i)) / windows;
    }
  }
  return MeasureSketch(s.alphabet_ptr(), std::move(marginals));
}

struct ConsistencyReport {
  bool pass = true;
  double worst_violation = 0.0;
};

/// Checks Σ p_n = 1 and the prefix/suffix relations Σ_a p_{n+1}(Wa) = p_n(W) =
/// Σ_a p_{n+1}(aW) for every n < depth. Words of length n are enumerated from
/// the support of p_n, p_{n+1}'s prefixes and p_{n+1}'s suffixes.
inline ConsistencyReport check_consistency(const MeasureSketch& sketch) {
  const std::uint64_t denom = sketch.exact_denominator();
  // With an exact denominator, compare integer numerators instead of doubles.
  auto as_units = [&](double p) { return denom > 0 ? std::round(p * static_cast<double>(denom)) : p; };
  const double scale = denom > 0 ? static_cast<double>(denom) : 1.0;

  ConsistencyReport report;
  auto note = [&](double violation) { report.worst_violation = std::max(report.worst_violation, violation); };

  for (std::size_t n = 1; n <= sketch.depth(); ++n) {
    double total = 0.0;
    for (const auto& [w, p] : sketch.marginal(n)) total += as_units(p);
    note(std::abs(total - scale) / scale);
  }
  for (std::size_t n = 1; n < sketch.depth(); ++n) {
    std::map<Gram, double> by_prefix;
    std::map<Gram, double> by_suffix;
    for (const auto& [w, p] : sketch.marginal(n)) {
      by_prefix.emplace(w, 0.0);
      by_suffix.emplace(w, 0.0);
    }
    for (const auto& [w, p] : sketch.marginal(n + 1)) {
      by_prefix[Gram(w.begin(), w.end() - 1)] += as_units(p);
      by_suffix[Gram(w.begin() + 1, w.end())] += as_units(p);
    }
    for (const auto& [w, sum] : by_prefix) note(std::abs(sum - as_units(sketch.probability(w))) / scale);
    for (const auto& [w, sum] : by_suffix) note(std::abs(sum - as_units(sketch.probability(w))) / scale);
  }
  report.pass = report.worst_violation <= sketch.consistency_tol();
  return report;
}

using CompletionPoint = std::variant<Str, MeasureSketch>;

namespace detail {

// Sparse vector over length-n words, keyed by base-|Σ| word code (sorted).
using CodedVector = std::vector<std::pair<std::uint64_t, double>>;

inline std::uint64_t word_code(std::span<const Rank> w, std::size_t sigma) {
  std::uint64_t code = 0;
  for (Rank r : w) code = code * sigma + r;
  return code;
}

inline CodedVector coded(const Marginal& m, std::size_t sigma) {
  CodedVector out;
  out.reserve(m.size());
  for (const auto& [w, p] : m) out.emplace_back(word_code(w, sigma), p);
  return out;  // std::map order on equal-length words matches code order
}

// Window counts of S at scale n, by rolling code.
inline CodedVector window_counts(const Str& s, std::size_t n) {
  CodedVector out;
  if (n > s.size()) return out;
  const std::size_t sigma = s.alphabet().size();
  std::uint64_t top = 1;
  for (std::size_t i = 1; i < n; ++i) top *= sigma;
  std::unordered_map<std::uint64_t, std::uint64_t> counts;
  std::uint64_t code = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i >= n) code -= static_cast<std::uint64_t>(s[i - n]) * top;
    code = code * sigma + s[i];
    if (i + 1 >= n) ++counts[code];
  }
  out.reserve(counts.size());
  for (const auto& [c, k] : counts) out.emplace_back(c, static_cast<double>(k));
  std::sort(out.begin(), out.end());
  return out;
}

// Angle between nonnegative vectors via 2·asin(‖u − v‖/2) of their unit
// directions; exact conventions for zero vectors.
inline double direction_angle(const CodedVector& x, const CodedVector& y) {
  auto norm = [](const CodedVector& v) {
    double acc = 0.0;
    for (const auto& [c, p] : v) acc += p * p;
    return std::sqrt(acc);
  };
  const double nx = norm(x);
  const double ny = norm(y);
  if (nx == 0.0 && ny == 0.0) return 0.0;
  if (nx == 0.0 || ny == 0.0) return kHalfPi;
  double gap = 0.0;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < x.size() || j < y.size()) {
    double a = 0.0;
    double b = 0.0;
    if (j == y.size() || (i < x.size() && x[i].first < y[j].first)) {
      a = x[i++].second / nx;
    } else if (i == x.size() || y[j].first < x[i].first) {
      b = y[j++].second / ny;
    } else {
      a = x[i++].second / nx;
      b = y[j++].second / ny;
    }
    gap += (a - b) * (a - b);
  }
  return 2.0 * std::asin(std::min(1.0, std::sqrt(gap) / 2.0));
}

inline double geometric_tail(double rho, std::size_t first) {
  return kHalfPi * std::pow(rho, static_cast<double>(first)) / (1.0 - rho);
}

inline DistanceInterval string_to_sketch(const Str& s, const MeasureSketch& mu, double rho) {
  if (!s.same_alphabet(Str::empty(mu.alphabet_ptr()))) throw Error("string and sketch use different alphabets");
  const std::size_t sigma = mu.alphabet().size();
  const std::size_t depth = mu.depth();
  double known = 0.0;
  double weight = 1.0;
  for (std::size_t n = 1; n <= depth; ++n) {
    weight *= rho;
    const double theta = n > s.size() ? kHalfPi : direction_angle(window_counts(s, n), coded(mu.marginal(n), sigma));
    known += weight * theta;
  }
  // Beyond the depth: exactly π/2 where the string has no n-grams, unknown below.
  const std::size_t certain_from = std::max(depth, s.size()) + 1;
  return {known + geometric_tail(rho, certain_from), known + geometric_tail(rho, depth + 1)};
}

inline DistanceInterval sketch_to_sketch(const MeasureSketch& a, const MeasureSketch& b, double rho) {
  if (!(a.alphabet() == b.alphabet())) throw Error("sketches use different alphabets");
  const std::size_t sigma = a.alphabet().size();
  const std::size_t depth = std::min(a.depth(), b.depth());
  double known = 0.0;
  double weight = 1.0;
  for (std::size_t n = 1; n <= depth; ++n) {
    weight *= rho;
    known += weight * direction_angle(coded(a.marginal(n), sigma), coded(b.marginal(n), sigma));
  }
  return {known, known + geometric_tail(rho, depth + 1)};
}

}  // namespace detail

/// d̂_ρ(X, Y) as an interval: exact for string pairs; scales beyond a sketch's
/// depth contribute [0, π/2]ρ^n unless a string side makes them exactly π/2.
inline DistanceInterval extended_dist(const CompletionPoint& x, const CompletionPoint& y, double rho) {
  if (!(rho > 0.0 && rho < 1.0)) throw Error("extended distance requires 0 < rho < 1");
  if (const auto* sx = std::get_if<Str>(&x)) {
    if (const auto* sy = std::get_if<Str>(&y)) {
      const double d = dist(*sx, *sy, rho);
      return {d, d};
    }
    return detail::string_to_sketch(*sx, std::get<MeasureSketch>(y), rho);
  }
  if (const auto* sy = std::get_if<Str>(&y)) return detail::string_to_sketch(*sy, std::get<MeasureSketch>(x), rho);
  return detail::sketch_to_sketch(std::get<MeasureSketch>(x), std::get<MeasureSketch>(y), rho);
}

/// Raised when no string within the configured caps reaches the target bound.
class InfeasibleError : public Error {
 public:
  InfeasibleError(const std::string& what, double best_bound) : Error(what), best_bound_(best_bound) {}
  double best_bound() const noexcept { return best_bound_; }

 private:
  double best_bound_;
};

struct ApproximationConfig {
  std::uint64_t max_denominator = 1024;
  std::size_t max_length = std::size_t{1} << 20;
};

struct Approximation {
  Str string;
  Str cycle_word;  // S = cycle_word^repetitions
  std::size_t repetitions = 0;
  std::uint64_t denominator = 0;
  double upper_bound = 0.0;  // verified d̂_ρ(string, sketch).hi
};

namespace detail {

// De Bruijn multigraph on words of length depth-1; edge w (a word of length
// depth, by code) runs from its prefix to its suffix.
class DeBruijnMultigraph {
 public:
  DeBruijnMultigraph(std::size_t sigma, std::size_t depth) : sigma_(sigma) {
    vertices_ = 1;
    for (std::size_t i = 1; i < depth; ++i) vertices_ *= sigma;
    edges_ = vertices_ * sigma;
    if (edges_ > (std::uint64_t{1} << 26)) throw Error("de Bruijn graph too large for this alphabet and depth");
    mult_.assign(edges_, 0);
  }

  std::uint64_t vertices() const noexcept { return vertices_; }
  std::uint64_t tail(std::uint64_t w) const noexcept { return w / sigma_; }
  std::uint64_t head(std::uint64_t w) const noexcept { return w % vertices_; }
  std::uint64_t edge(std::uint64_t v, std::uint64_t a) const noexcept { return v * sigma_ + a; }
  std::uint64_t& multiplicity(std::uint64_t w) { return mult_[w]; }
  std::uint64_t total() const { return std::accumulate(mult_.begin(), mult_.end(), std::uint64_t{0}); }

  // Shortest edge path v -> u (v != u). With `support_only`, only edges of
  // positive multiplicity are used; may then return nullopt.
  std::optional<std::vector<std::uint64_t>> path(std::uint64_t from, std::uint64_t to, bool support_only) const {
    std::vector<std::int64_t> via(vertices_, -1);
    std::vector<char> seen(vertices_, 0);
    std::queue<std::uint64_t> frontier;
    frontier.push(from);
    seen[from] = 1;
    while (!frontier.empty()) {
      const std::uint64_t v = frontier.front();
      frontier.pop();
      if (v == to) break;
      for (std::uint64_t a = 0; a < sigma_; ++a) {
        const std::uint64_t w = edge(v, a);
        if (support_only && mult_[w] == 0) continue;
        const std::uint64_t h = head(w);
        if (seen[h]) continue;
        seen[h] = 1;
        via[h] = static_cast<std::int64_t>(w);
        frontier.push(h);
      }
    }
    if (!seen[to]) return std::nullopt;
    std::vector<std::uint64_t> edges;
    for (std::uint64_t v = to; v != from;) {
      const auto w = static_cast<std::uint64_t>(via[v]);
      edges.push_back(w);
      v = tail(w);
    }
    std::reverse(edges.begin(), edges.end());
    return edges;
  }

  void add_path(std::uint64_t from, std::uint64_t to) {
    auto p = path(from, to, true);
    if (!p) p = path(from, to, false);
    for (std::uint64_t w : *p) ++mult_[w];
  }

  // Adds paths from vertices with surplus in-degree to those with surplus
  // out-degree until every vertex is balanced.
  void balance() {
    std::vector<std::int64_t> excess(vertices_, 0);  // in - out
    for (std::uint64_t w = 0; w < edges_; ++w) {
      excess[tail(w)] -= static_cast<std::int64_t>(mult_[w]);
      excess[head(w)] += static_cast<std::int64_t>(mult_[w]);
    }
    std::uint64_t src = 0;
    std::uint64_t dst = 0;
    for (;;) {
      while (src < vertices_ && excess[src] <= 0) ++src;
      while (dst < vertices_ && excess[dst] >= 0) ++dst;
      if (src == vertices_ || dst == vertices_) break;
      add_path(src, dst);
      --excess[src];
      ++excess[dst];
    }
  }

  // Joins the weakly connected components of the support into one by a
  // closed chain of paths through their smallest vertices.
  void connect() {
    std::vector<std::uint64_t> parent(vertices_);
    std::iota(parent.begin(), parent.end(), std::uint64_t{0});
    auto find = [&](std::uint64_t v) {
      while (parent[v] != v) v = parent[v] = parent[parent[v]];
      return v;
    };
    std::vector<char> used(vertices_, 0);
    for (std::uint64_t w = 0; w < edges_; ++w) {
      if (mult_[w] == 0) continue;
      used[tail(w)] = used[head(w)] = 1;
      parent[find(tail(w))] = find(head(w));
    }
    std::vector<std::uint64_t> reps;
    std::vector<char> rep_seen(vertices_, 0);
    for (std::uint64_t v = 0; v < vertices_; ++v) {
      if (!used[v]) continue;
      const std::uint64_t root = find(v);
      if (!rep_seen[root]) {
        rep_seen[root] = 1;
        reps.push_back(v);
      }
    }
    if (reps.size() < 2) return;
    for (std::size_t i = 0; i < reps.size(); ++i) {
      const std::uint64_t from = reps[i];
      const std::uint64_t to = reps[(i + 1) % reps.size()];
      const auto p = path(from, to, false);
      for (std::uint64_t w : *p) ++mult_[w];
    }
  }

  // Hierholzer's algorithm from the smallest vertex with an outgoing edge;
  // out-edges are taken in ascending symbol order. Returns the last symbol of
  // each edge along the circuit, i.e. a cyclic word whose cyclic windows are
  // exactly the edge multiset.
  std::vector<Rank> eulerian_word() const {
    auto remaining = mult_;
    std::uint64_t start = vertices_;
    for (std::uint64_t w = 0; w < edges_; ++w) {
      if (remaining[w] > 0) {
        start = tail(w);
        break;
      }
    }
    if (start == vertices_) return {};
    std::vector<std::uint64_t> next_symbol(vertices_, 0);
    std::vector<std::uint64_t> vertex_stack{start};
    std::vector<std::uint64_t> edge_stack;
    std::vector<std::uint64_t> circuit;
    while (!vertex_stack.empty()) {
      const std::uint64_t v = vertex_stack.back();
      auto& a = next_symbol[v];
      while (a < sigma_ && remaining[edge(v, a)] == 0) ++a;
      if (a < sigma_) {
        const std::uint64_t w = edge(v, a);
        --remaining[w];
        vertex_stack.push_back(head(w));
        edge_stack.push_back(w);
      } else {
        vertex_stack.pop_back();
        if (!edge_stack.empty()) {
          circuit.push_back(edge_stack.back());
          edge_stack.pop_back();
        }
      }
    }
    std::reverse(circuit.begin(), circuit.end());
    std::vector<Rank> word;
    word.reserve(circuit.size());
    for (std::uint64_t w : circuit) word.push_back(static_cast<Rank>(w % sigma_));
    return word;
  }

 private:
  std::uint64_t sigma_;
  std::uint64_t vertices_ = 1;
  std::uint64_t edges_ = 1;
  std::vector<std::uint64_t> mult_;
};

}  // namespace detail

/// Cyclic word whose depth-N windows realize round(M · p_N), repaired to a
/// balanced, connected circulation. Empty if rounding leaves no edges.
inline std::vector<Rank> circulation_word(const MeasureSketch& sketch, std::uint64_t denominator) {
  const std::size_t sigma = sketch.alphabet().size();
  detail::DeBruijnMultigraph graph(sigma, sketch.depth());
  for (const auto& [w, p] : sketch.marginal(sketch.depth())) {
    graph.multiplicity(detail::word_code(w, sigma)) =
        static_cast<std::uint64_t>(std::llround(p * static_cast<double>(denominator)));
  }
  if (graph.total() == 0) return {};
  graph.balance();
  graph.connect();
  return graph.eulerian_word();
}

/// Finds S = S0^k with d̂_ρ(S, sketch).hi < eps, where S0 reads an Eulerian
/// cycle of the de Bruijn multigraph weighted by a rational rounding of p_N.
/// Denominators are tried in increasing powers of two up to
/// `config.max_denominator`, repetitions in powers of two up to `max_length`.
inline Approximation approximate_measure_by_string(const MeasureSketch& sketch, double eps, double rho,
                                                   const ApproximationConfig& config = {}) {
  if (!(eps > 0.0)) throw Error("eps must be positive");
  if (!(rho > 0.0 && rho < 1.0)) throw Error("approximation requires 0 < rho < 1");
  const auto report = check_consistency(sketch);
  if (!report.pass) throw Error("sketch fails its consistency check");

  double best = std::numeric_limits<double>::infinity();
  std::vector<std::uint64_t> denominators;
  for (std::uint64_t m = 16; m < config.max_denominator; m *= 2) denominators.push_back(m);
  denominators.push_back(config.max_denominator);

  for (std::uint64_t m : denominators) {
    const auto word = circulation_word(sketch, m);
    if (word.empty()) continue;
    const Str cycle(sketch.alphabet_ptr(), word);
    double previous = std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k * cycle.size() <= config.max_length; k *= 2) {
      Str candidate = cycle.repeat(k);
      const double bound = extended_dist(candidate, sketch, rho).hi;
      best = std::min(best, bound);
      if (bound < eps) return {std::move(candidate), cycle, k, m, bound};
      // Stop doubling once boundary effects no longer matter.
      if (bound > previous * 0.999) break;
      previous = bound;
    }
  }
  throw InfeasibleError("no string within the configured caps approximates the sketch to the requested eps",
                        best);
}

/// Distance oracle over Σ*.
using DistanceOracle = std::function<double(const Str&, const Str&)>;

struct RecoveryLimits {
  std::size_t max_scale = 3;
  std::size_t max_alphabet = 4;
};

namespace detail {

// θ_n recovered recursively from distances to words of length ≤ n.
class ThetaRecovery {
 public:
  ThetaRecovery(const DistanceOracle& oracle, AlphabetPtr alphabet, double rho)
      : oracle_(oracle), alphabet_(std::move(alphabet)), rho_(rho), empty_(Str::empty(alphabet_)) {}

  // θ_j(X, Y) for arbitrary X, Y.
  double theta(const Str& x, const Str& y, std::size_t j) {
    const bool x_has = length(x) >= j;
    const bool y_has = length(y) >= j;
    if (!x_has && !y_has) return 0.0;
    if (x_has != y_has) return kHalfPi;
    if (length(y) == j) return word_theta(x, y);
    if (length(x) == j) return word_theta(y, x);
    // cos θ_j(X, Y) = Σ_V cos θ_j(X, V) cos θ_j(Y, V); both coefficient
    // vectors are unit, so take the angle from their chord length.
    double chord = 0.0;
    for (const auto& v : words(j)) {
      const double diff = std::cos(word_theta(x, v)) - std::cos(word_theta(y, v));
      chord += diff * diff;
    }
    return 2.0 * std::asin(std::min(1.0, std::sqrt(chord) / 2.0));
  }

 private:
  using Key = std::tuple<std::vector<Rank>, std::vector<Rank>>;

  double d(const Str& x, const Str& y) { return oracle_(x, y); }

  std::size_t length(const Str& x) {
    const std::vector<Rank> key(x.symbols().begin(), x.symbols().end());
    if (auto it = lengths_.find(key); it != lengths_.end()) return it->second;
    const std::size_t len = recover_length(d(empty_, x), rho_);
    lengths_.emplace(key, len);
    return len;
  }

  // θ_k(X, W) for |W| = k.
  double word_theta(const Str& x, const Str& w) {
    Key key{std::vector<Rank>(x.symbols().begin(), x.symbols().end()),
            std::vector<Rank>(w.symbols().begin(), w.symbols().end())};
    if (auto it = word_memo_.find(key); it != word_memo_.end()) return it->second;
    const std::size_t k = length(w);
    double lower = 0.0;
    for (std::size_t j = 1; j < k; ++j) lower += std::pow(rho_, static_cast<double>(j)) * theta(x, w, j);
    const double tail = std::max(0.0, d(empty_, x) - d(empty_, w));
    const double value = (d(x, w) - lower - tail) / std::pow(rho_, static_cast<double>(k));
    const double clamped = std::clamp(value, 0.0, kHalfPi);
    word_memo_.emplace(std::move(key), clamped);
    return clamped;
  }

  const std::vector<Str>& words(std::size_t j) {
    if (auto it = words_.find(j); it != words_.end()) return it->second;
    std::vector<Str> out;
    std::vector<Rank> w(j, 0);
    const auto sigma = static_cast<Rank>(alphabet_->size());
    for (;;) {
      out.emplace_back(alphabet_, w);
      std::size_t pos = j;
      while (pos > 0 && ++w[pos - 1] == sigma) w[--pos] = 0;
      if (pos == 0) break;
    }
    return words_.emplace(j, std::move(out)).first->second;
  }

  const DistanceOracle& oracle_;
  AlphabetPtr alphabet_;
  double rho_;
  Str empty_;
  std::map<std::vector<Rank>, std::size_t> lengths_;
  std::map<Key, double> word_memo_;
  std::map<std::size_t, std::vector<Str>> words_;
};

}  // namespace detail

/// Reconstructs θ_n(S, T) using only d_ρ queries against S, T, ε and words of
/// length ≤ n. Cost grows as |Σ|^n, so n and |Σ| are capped by `limits`.
inline double recover_theta(const DistanceOracle& oracle, const Str& s, const Str& t, std::size_t n, double rho,
                            const RecoveryLimits& limits = {}) {
  s.require_same_alphabet(t);
  if (n == 0) throw Error("scale must be positive");
  if (!(rho > 0.0)) throw Error("rho must be positive");
  if (n > limits.max_scale) throw Error("recover_theta scale exceeds the configured cap");
  if (s.alphabet().size() > limits.max_alphabet) throw Error("recover_theta alphabet exceeds the configured cap");
  detail::ThetaRecovery recovery(oracle, s.alphabet_ptr(), rho);
  return recovery.theta(s, t, n);
}

/// Text form: `depth N alphabet k`, then one `n<TAB>word<TAB>probability` row
/// per word. All k symbols are listed at n = 1 (zero probabilities included)
/// and fix the rank order; other rows omit zeros. Probabilities use 17
/// significant digits, so parse(serialize(x)) reproduces every value.
inline std::string serialize_sketch(const MeasureSketch& sketch) {
  const Alphabet& alphabet = sketch.alphabet();
  for (Rank r = 0; r < alphabet.size(); ++r) {
    if (utf8_symbols(alphabet.name(r)).size() != 1) {
      throw Error("sketch serialization needs single-character symbol names");
    }
  }
  std::ostringstream out;
  out << "depth " << sketch.depth() << " alphabet " << alphabet.size() << "\n";
  auto row = [&](std::size_t n, const Gram& w, double p) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), p, std::chars_format::general, 17);
    out << n << '\t' << alphabet.decode(w) << '\t' << std::string_view(buf, static_cast<std::size_t>(res.ptr - buf))
        << '\n';
  };
  for (Rank r = 0; r < alphabet.size(); ++r) row(1, Gram{r}, sketch.probability(Gram{r}));
  for (std::size_t n = 2; n <= sketch.depth(); ++n) {
    for (const auto& [w, p] : sketch.marginal(n)) row(n, w, p);
  }
  return out.str();
}

inline MeasureSketch parse_sketch(std::string_view text, double consistency_tol = 1e-9) {
  std::istringstream in{std::string(text)};
  std::string line;
  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!line.empty()) return true;
    }
    return false;
  };
  if (!next_line()) throw Error("sketch file is empty");
  std::istringstream header(line);
  std::string depth_word;
  std::string alphabet_word;
  std::size_t depth = 0;
  std::size_t sigma = 0;
  if (!(header >> depth_word >> depth >> alphabet_word >> sigma) || depth_word != "depth" ||
      alphabet_word != "alphabet" || depth == 0 || sigma == 0) {
    throw Error("sketch header must read 'depth N alphabet k'");
  }

  std::vector<std::string> names;
  std::vector<std::tuple<std::size_t, std::string, double>> rows;
  std::size_t line_no = 1;
  while (next_line()) {
    ++line_no;
    const auto t1 = line.find('\t');
    const auto t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
    if (t2 == std::string::npos) throw Error("sketch line " + std::to_string(line_no) + ": expected 3 tab-separated fields");
    std::size_t n = 0;
    double p = 0.0;
    const std::string_view n_field(line.data(), t1);
    const std::string_view p_field(line.data() + t2 + 1, line.size() - t2 - 1);
    if (std::from_chars(n_field.data(), n_field.data() + n_field.size(), n).ec != std::errc{} ||
        std::from_chars(p_field.data(), p_field.data() + p_field.size(), p).ec != std::errc{}) {
      throw Error("sketch line " + std::to_string(line_no) + ": malformed scale or probability");
    }
    std::string word = line.substr(t1 + 1, t2 - t1 - 1);
    if (n == 1) names.push_back(word);
    rows.emplace_back(n, std::move(word), p);
  }
  if (names.size() != sigma) throw Error("sketch must list every alphabet symbol at scale 1");
  auto alphabet = std::make_shared<const Alphabet>(names);
  std::vector<Marginal> marginals(depth);
  for (const auto& [n, word, p] : rows) {
    if (n == 0 || n > depth) throw Error("sketch row scale outside the declared depth");
    auto ranks = alphabet->encode(word);
    if (ranks.size() != n) throw Error("sketch word '" + word + "' does not have length " + std::to_string(n));
    marginals[n - 1][std::move(ranks)] = p;
  }
  return MeasureSketch(std::move(alphabet), std::move(marginals), consistency_tol);
}

}  // namespace wad::completion
