#pragma once

// DBSCAN over precomputed distance matrices, silhouette-driven label-free
// tuning on a fixed eps × min_samples grid, and ARI/NMI evaluation.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <limits>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "wad/parallel.hpp"
#include "wad/strings.hpp"

namespace wad::clustering {

/// Dense symmetric matrix with an exactly zero diagonal.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  explicit DistanceMatrix(std::size_t n, std::string provenance = {})
      : n_(n), values_(n * n, 0.0), provenance_(std::move(provenance)) {}

  /// Fills D[i][j] = D[j][i] = fn(i, j) for i < j, using up to `threads` workers.
  template <class Fn>
  static DistanceMatrix build(std::size_t n, Fn&& fn, std::size_t threads = 1, std::string provenance = {}) {
    DistanceMatrix d(n, std::move(provenance));
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    pairs.reserve(n * (n > 0 ? n - 1 : 0) / 2);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
    }
    parallel_for(pairs.size(), threads, [&](std::size_t p) {
      const auto [i, j] = pairs[p];
      const double v = fn(i, j);
      if (!(v >= 0.0) || !std::isfinite(v)) throw Error("distance must be finite and nonnegative");
      d.values_[i * n + j] = v;
      d.values_[j * n + i] = v;
    });
    return d;
  }

  std::size_t size() const noexcept { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return values_[i * n_ + j]; }
  const std::string& provenance() const noexcept { return provenance_; }

  void set(std::size_t i, std::size_t j, double v) {
    if (i == j) {
      if (v != 0.0) throw Error("distance matrix diagonal must be zero");
      return;
    }
    if (!(v >= 0.0)) throw Error("distances must be nonnegative");
    values_[i * n_ + j] = v;
    values_[j * n_ + i] = v;
  }

  /// Upper-triangle entries D[i][j], i < j, row-major.
  std::vector<double> upper_triangle() const {
    std::vector<double> out;
    out.reserve(n_ * (n_ > 0 ? n_ - 1 : 0) / 2);
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = i + 1; j < n_; ++j) out.push_back((*this)(i, j));
    }
    return out;
  }

 private:
  std::size_t n_ = 0;
  std::vector<double> values_;
  std::string provenance_;
};

inline constexpr int kNoise = -1;

/// -1 = noise, clusters numbered 0..C-1 in order of discovery.
using ClusterLabels = std::vector<int>;

inline std::size_t count_clusters(const ClusterLabels& labels) {
  int top = -1;
  for (int l : labels) top = std::max(top, l);
  return static_cast<std::size_t>(top + 1);
}

inline double noise_fraction(const ClusterLabels& labels) {
  if (labels.empty()) return 0.0;
  const auto noise = std::count(labels.begin(), labels.end(), kNoise);
  return static_cast<double>(noise) / static_cast<double>(labels.size());
}

/// DBSCAN: i is core iff |{j : D[i][j] ≤ eps}| ≥ min_samples (self included).
/// Seeds and expansion proceed in ascending index order.
inline ClusterLabels dbscan(const DistanceMatrix& d, double eps, std::size_t min_samples) {
  if (!(eps >= 0.0)) throw Error("eps must be nonnegative");
  if (min_samples < 1) throw Error("min_samples must be at least 1");
  const std::size_t n = d.size();
  constexpr int kUnvisited = -2;
  ClusterLabels labels(n, kUnvisited);

  auto neighbours = [&](std::size_t i) {
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < n; ++j) {
      if (d(i, j) <= eps) out.push_back(j);
    }
    return out;
  };

  int cluster = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (labels[i] != kUnvisited) continue;
    auto seeds = neighbours(i);
    if (seeds.size() < min_samples) {
      labels[i] = kNoise;
      continue;
    }
    labels[i] = cluster;
    std::deque<std::size_t> queue(seeds.begin(), seeds.end());
    while (!queue.empty()) {
      const std::size_t j = queue.front();
      queue.pop_front();
      if (labels[j] == kNoise) labels[j] = cluster;  // border point
      if (labels[j] != kUnvisited) continue;
      labels[j] = cluster;
      auto more = neighbours(j);
      if (more.size() >= min_samples) queue.insert(queue.end(), more.begin(), more.end());
    }
    ++cluster;
  }
  return labels;
}

/// Mean silhouette over non-noise points, computed on the non-noise
/// sub-matrix. −1 when fewer than two clusters or two points remain, or when
/// every remaining point is its own cluster.
inline double silhouette_non_noise(const DistanceMatrix& d, const ClusterLabels& labels) {
  if (labels.size() != d.size()) throw Error("labels and matrix differ in size");
  std::vector<std::size_t> points;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != kNoise) points.push_back(i);
  }
  std::map<int, std::size_t> sizes;
  for (std::size_t i : points) ++sizes[labels[i]];
  if (points.size() < 2 || sizes.size() < 2 || sizes.size() >= points.size()) return -1.0;

  double total = 0.0;
  for (std::size_t i : points) {
    std::map<int, double> sums;
    for (std::size_t j : points) {
      if (j != i) sums[labels[j]] += d(i, j);
    }
    const std::size_t own = sizes[labels[i]];
    if (own == 1) continue;  // singleton clusters score 0
    const double a = sums[labels[i]] / static_cast<double>(own - 1);
    double b = std::numeric_limits<double>::infinity();
    for (const auto& [label, count] : sizes) {
      if (label != labels[i]) b = std::min(b, sums[label] / static_cast<double>(count));
    }
    const double denom = std::max(a, b);
    if (denom > 0.0) total += (b - a) / denom;
  }
  return total / static_cast<double>(points.size());
}

namespace detail {

// Relabels so noise becomes its own cluster id; ids are dense from 0.
inline std::vector<std::size_t> dense_with_noise(const ClusterLabels& labels) {
  std::map<int, std::size_t> ids;
  for (int l : labels) ids.emplace(l, 0);
  std::size_t next = 0;
  for (auto& [label, id] : ids) id = next++;
  std::vector<std::size_t> out;
  out.reserve(labels.size());
  for (int l : labels) out.push_back(ids[l]);
  return out;
}

struct Contingency {
  std::vector<std::vector<double>> table;
  std::vector<double> rows;
  std::vector<double> cols;
  double n = 0.0;
};

inline Contingency contingency(const ClusterLabels& a, const ClusterLabels& b) {
  if (a.size() != b.size()) throw Error("label arrays differ in length");
  const auto ra = dense_with_noise(a);
  const auto rb = dense_with_noise(b);
  const std::size_t na = ra.empty() ? 0 : *std::max_element(ra.begin(), ra.end()) + 1;
  const std::size_t nb = rb.empty() ? 0 : *std::max_element(rb.begin(), rb.end()) + 1;
  Contingency c;
  c.table.assign(na, std::vector<double>(nb, 0.0));
  c.rows.assign(na, 0.0);
  c.cols.assign(nb, 0.0);
  for (std::size_t i = 0; i < ra.size(); ++i) {
    c.table[ra[i]][rb[i]] += 1.0;
    c.rows[ra[i]] += 1.0;
    c.cols[rb[i]] += 1.0;
  }
  c.n = static_cast<double>(ra.size());
  return c;
}

inline double pairs(double x) { return x * (x - 1.0) / 2.0; }

}  // namespace detail

/// Adjusted Rand index; noise (-1) counts as one more cluster.
inline double ari(const ClusterLabels& a, const ClusterLabels& b) {
  const auto c = detail::contingency(a, b);
  double index = 0.0;
  for (const auto& row : c.table) {
    for (double v : row) index += detail::pairs(v);
  }
  double sum_rows = 0.0;
  double sum_cols = 0.0;
  for (double v : c.rows) sum_rows += detail::pairs(v);
  for (double v : c.cols) sum_cols += detail::pairs(v);
  const double total = detail::pairs(c.n);
  if (total == 0.0) return 1.0;
  const double expected = sum_rows * sum_cols / total;
  const double max_index = (sum_rows + sum_cols) / 2.0;
  // Only when both partitions are all-singletons or both a single cluster.
  if (max_index == expected) return 1.0;
  return (index - expected) / (max_index - expected);
}

/// Normalized mutual information, arithmetic-mean normalization; noise (-1)
/// counts as one more cluster.
inline double nmi(const ClusterLabels& a, const ClusterLabels& b) {
  const auto c = detail::contingency(a, b);
  if (c.n == 0.0) return 1.0;
  auto entropy = [&](const std::vector<double>& counts) {
    double h = 0.0;
    for (double v : counts) {
      if (v > 0.0) h -= v / c.n * std::log(v / c.n);
    }
    return h;
  };
  const double ha = entropy(c.rows);
  const double hb = entropy(c.cols);
  if (c.rows.size() == 1 && c.cols.size() == 1) return 1.0;
  double mi = 0.0;
  for (std::size_t i = 0; i < c.table.size(); ++i) {
    for (std::size_t j = 0; j < c.table[i].size(); ++j) {
      const double v = c.table[i][j];
      if (v > 0.0) mi += v / c.n * std::log(v * c.n / (c.rows[i] * c.cols[j]));
    }
  }
  const double norm = (ha + hb) / 2.0;
  if (norm <= 0.0) return 1.0;
  return std::clamp(mi / norm, 0.0, 1.0);
}

struct TrialRecord {
  double eps = 0.0;
  std::size_t min_samples = 0;
  double silhouette = -1.0;
  std::size_t n_clusters = 0;
  double noise_frac = 0.0;
  double ari = std::numeric_limits<double>::quiet_NaN();
  double nmi = std::numeric_limits<double>::quiet_NaN();
  double wall_time_s = 0.0;
};

inline constexpr std::size_t kEpsSteps = 25;
inline constexpr std::size_t kMinSamplesGrid[] = {3, 5, 8, 13};

/// Linear-interpolation quantile of unsorted values (q in [0, 1]).
inline double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw Error("quantile of an empty sample");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + (values[hi] - values[lo]) * frac;
}

/// eps candidates: kEpsSteps evenly spaced values over [Q_0.02, Q_0.20] of the
/// upper-triangle distances; a single value when the interval degenerates.
inline std::vector<double> eps_grid(const DistanceMatrix& d) {
  const auto upper = d.upper_triangle();
  const double lo = quantile(upper, 0.02);
  const double hi = quantile(upper, 0.20);
  if (!(hi > lo)) return {lo};
  std::vector<double> grid(kEpsSteps);
  for (std::size_t i = 0; i < kEpsSteps; ++i) {
    grid[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(kEpsSteps - 1);
  }
  grid.back() = hi;
  return grid;
}

struct TuneResult {
  TrialRecord best;
  std::vector<TrialRecord> trials;
};

/// Grid search over eps × {3, 5, 8, 13}, maximizing the non-noise
/// silhouette. Ties go to the lower eps, then the lower min_samples. The grid
/// is deterministic, so `seed` does not change the result; it is kept so runs
/// record one.
inline TuneResult tune(const DistanceMatrix& d, std::uint64_t seed = 0, std::size_t threads = 1) {
  (void)seed;
  if (d.size() < 3) throw Error("tuning needs at least three points");
  const auto grid = eps_grid(d);
  std::vector<TrialRecord> trials(grid.size() * std::size(kMinSamplesGrid));
  parallel_for(trials.size(), threads, [&](std::size_t t) {
    const auto start = std::chrono::steady_clock::now();
    TrialRecord rec;
    rec.eps = grid[t / std::size(kMinSamplesGrid)];
    rec.min_samples = kMinSamplesGrid[t % std::size(kMinSamplesGrid)];
    const auto labels = dbscan(d, rec.eps, rec.min_samples);
    rec.silhouette = silhouette_non_noise(d, labels);
    rec.n_clusters = count_clusters(labels);
    rec.noise_frac = noise_fraction(labels);
    rec.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    trials[t] = rec;
  });
  std::size_t best = 0;
  for (std::size_t t = 1; t < trials.size(); ++t) {
    if (trials[t].silhouette > trials[best].silhouette) best = t;
  }
  return {trials[best], std::move(trials)};
}

/// Tunes, refits DBSCAN at the selected parameters and scores the labeling
/// against `labels_true`.
inline TrialRecord evaluate(const DistanceMatrix& d, const ClusterLabels& labels_true, std::uint64_t seed = 0,
                            std::size_t threads = 1) {
  if (labels_true.size() != d.size()) throw Error("ground-truth labels and matrix differ in size");
  const auto start = std::chrono::steady_clock::now();
  auto tuned = tune(d, seed, threads);
  TrialRecord rec = tuned.best;
  const auto labels = dbscan(d, rec.eps, rec.min_samples);
  rec.silhouette = silhouette_non_noise(d, labels);
  rec.n_clusters = count_clusters(labels);
  rec.noise_frac = noise_fraction(labels);
  rec.ari = ari(labels_true, labels);
  rec.nmi = nmi(labels_true, labels);
  rec.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

}  // namespace wad::clustering
