#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <vector>

namespace wad {

namespace detail {

// Induced sorting (SA-IS) over integer codes in [0, upper]. No terminal
// sentinel is required: the end of the text acts as a virtual smallest symbol.
inline std::vector<std::int32_t> sa_is(std::span<const std::int32_t> s, std::int32_t upper) {
  const auto n = static_cast<std::int32_t>(s.size());
  if (n == 0) return {};
  if (n == 1) return {0};
  if (n == 2) return s[0] < s[1] ? std::vector<std::int32_t>{0, 1} : std::vector<std::int32_t>{1, 0};

  std::vector<std::int32_t> sa(n);
  // is_s[i]: suffix i is S-type (smaller than suffix i+1).
  std::vector<char> is_s(n, 0);
  for (std::int32_t i = n - 2; i >= 0; --i) {
    is_s[i] = s[i] == s[i + 1] ? is_s[i + 1] : static_cast<char>(s[i] < s[i + 1]);
  }

  // Bucket boundaries: L-type suffixes fill each bucket from the front,
  // S-type ones from the back.
  std::vector<std::int32_t> l_start(upper + 2, 0);
  std::vector<std::int32_t> s_start(upper + 2, 0);
  for (std::int32_t i = 0; i < n; ++i) {
    if (!is_s[i]) {
      ++s_start[s[i]];
    } else {
      ++l_start[s[i] + 1];
    }
  }
  for (std::int32_t c = 0; c <= upper; ++c) {
    s_start[c] += l_start[c];
    if (c < upper) l_start[c + 1] += s_start[c];
  }

  auto induce = [&](const std::vector<std::int32_t>& lms) {
    std::fill(sa.begin(), sa.end(), -1);
    std::vector<std::int32_t> cursor(upper + 2);
    std::copy(s_start.begin(), s_start.end(), cursor.begin());
    for (std::int32_t d : lms) {
      if (d == n) continue;
      sa[cursor[s[d]]++] = d;
    }
    std::copy(l_start.begin(), l_start.end(), cursor.begin());
    sa[cursor[s[n - 1]]++] = n - 1;
    for (std::int32_t i = 0; i < n; ++i) {
      const std::int32_t v = sa[i];
      if (v >= 1 && !is_s[v - 1]) sa[cursor[s[v - 1]]++] = v - 1;
    }
    std::copy(l_start.begin(), l_start.end(), cursor.begin());
    for (std::int32_t i = n - 1; i >= 0; --i) {
      const std::int32_t v = sa[i];
      if (v >= 1 && is_s[v - 1]) sa[--cursor[s[v - 1] + 1]] = v - 1;
    }
  };

  std::vector<std::int32_t> lms_index(n + 1, -1);
  std::vector<std::int32_t> lms;
  for (std::int32_t i = 1; i < n; ++i) {
    if (!is_s[i - 1] && is_s[i]) {
      lms_index[i] = static_cast<std::int32_t>(lms.size());
      lms.push_back(i);
    }
  }
  const auto m = static_cast<std::int32_t>(lms.size());

  induce(lms);

  if (m > 0) {
    std::vector<std::int32_t> sorted_lms;
    sorted_lms.reserve(m);
    for (std::int32_t v : sa) {
      if (lms_index[v] != -1) sorted_lms.push_back(v);
    }
    // Name LMS substrings; equal substrings share a name.
    std::vector<std::int32_t> reduced(m);
    std::int32_t names = 0;
    reduced[lms_index[sorted_lms[0]]] = 0;
    for (std::int32_t i = 1; i < m; ++i) {
      std::int32_t l = sorted_lms[i - 1];
      std::int32_t r = sorted_lms[i];
      const std::int32_t end_l = lms_index[l] + 1 < m ? lms[lms_index[l] + 1] : n;
      const std::int32_t end_r = lms_index[r] + 1 < m ? lms[lms_index[r] + 1] : n;
      bool same = end_l - l == end_r - r;
      if (same) {
        while (l < end_l && s[l] == s[r]) {
          ++l;
          ++r;
        }
        if (l == n || s[l] != s[r]) same = false;
      }
      if (!same) ++names;
      reduced[lms_index[sorted_lms[i]]] = names;
    }
    const auto reduced_sa = sa_is(reduced, names);
    for (std::int32_t i = 0; i < m; ++i) sorted_lms[i] = lms[reduced_sa[i]];
    induce(sorted_lms);
  }
  return sa;
}

}  // namespace detail

/// Suffix array of `codes`, each code in [0, upper].
inline std::vector<std::int32_t> suffix_array(std::span<const std::int32_t> codes, std::int32_t upper) {
  return detail::sa_is(codes, upper);
}

/// Kasai's LCP: lcp[i] = |lcp(suffix sa[i-1], suffix sa[i])| for i ≥ 1, lcp[0] = 0.
inline std::vector<std::int32_t> lcp_kasai(std::span<const std::int32_t> codes, std::span<const std::int32_t> sa) {
  const auto n = static_cast<std::int32_t>(codes.size());
  std::vector<std::int32_t> rank(n);
  for (std::int32_t i = 0; i < n; ++i) rank[sa[i]] = i;
  std::vector<std::int32_t> lcp(n, 0);
  std::int32_t h = 0;
  for (std::int32_t i = 0; i < n; ++i) {
    if (rank[i] == 0) {
      h = 0;
      continue;
    }
    const std::int32_t j = sa[rank[i] - 1];
    while (i + h < n && j + h < n && codes[i + h] == codes[j + h]) ++h;
    lcp[rank[i]] = h;
    if (h > 0) --h;
  }
  return lcp;
}

}  // namespace wad
