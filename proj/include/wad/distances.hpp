#pragma once

// Named distance roster, parsed from specs of the form NAME[:key=value,...].

#include <charconv>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wad/baselines.hpp"
#include "wad/dataset_io.hpp"
#include "wad/metric.hpp"

namespace wad {

/// Raised for an unknown distance name or a malformed parameter list.
class UnknownDistance : public Error {
 public:
  using Error::Error;
};

inline constexpr std::size_t kHarnessMaxN = 60;

inline const std::vector<std::string>& distance_roster() {
  static const std::vector<std::string> names{"weighted_angle", "kgram_angle", "kgram_js",
                                              "levenshtein",    "damerau_levenshtein", "lcs"};
  return names;
}

struct NamedDistance {
  std::string name;
  std::string params;  // canonical `k=v;...` form, as written to results.csv
  bool edit_family = false;
  std::function<double(const Str&, const Str&)> fn;
};

namespace detail {

inline double parse_real(const std::string& key, const std::string& value) {
  double x = 0.0;
  const auto res = std::from_chars(value.data(), value.data() + value.size(), x);
  if (res.ec != std::errc{} || res.ptr != value.data() + value.size()) {
    throw UnknownDistance("parameter " + key + " expects a number, got '" + value + "'");
  }
  return x;
}

inline std::size_t parse_count(const std::string& key, const std::string& value) {
  std::size_t x = 0;
  const auto res = std::from_chars(value.data(), value.data() + value.size(), x);
  if (res.ec != std::errc{} || res.ptr != value.data() + value.size() || x == 0) {
    throw UnknownDistance("parameter " + key + " expects a positive integer, got '" + value + "'");
  }
  return x;
}

inline std::string roster_text() {
  std::string out;
  for (const auto& n : distance_roster()) out += (out.empty() ? "" : ", ") + n;
  return out;
}

}  // namespace detail

/// Weighted angle as the experiment harness evaluates it: the partial sum up
/// to max_n for ρ < 1, the exact value for ρ ≥ 1.
inline NamedDistance weighted_angle_distance(double rho, std::size_t max_n = kHarnessMaxN) {
  const DistanceOptions opts = rho < 1.0 ? DistanceOptions::truncated(rho, max_n) : DistanceOptions::exact(rho);
  opts.validate();
  std::string params = "rho=" + io::shortest(rho);
  if (max_n != kHarnessMaxN) params += ";max_n=" + std::to_string(max_n);
  return {"weighted_angle", params, false, [opts](const Str& s, const Str& t) { return dist(s, t, opts).lo; }};
}

/// Parses NAME[:key=value,...]. Recognized keys: weighted_angle rho, max_n;
/// kgram_angle and kgram_js k; damerau_levenshtein variant=full|osa.
inline NamedDistance parse_distance(std::string_view spec) {
  const auto colon = spec.find(':');
  const std::string name(spec.substr(0, colon));
  std::map<std::string, std::string> kv;
  if (colon != std::string_view::npos) {
    std::string_view rest = spec.substr(colon + 1);
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      const std::string_view item = rest.substr(0, comma);
      const auto eq = item.find('=');
      if (eq == std::string_view::npos || eq == 0) {
        throw UnknownDistance("malformed parameter '" + std::string(item) + "' (expected key=value)");
      }
      kv[std::string(item.substr(0, eq))] = std::string(item.substr(eq + 1));
      rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    }
  }
  auto take = [&](const std::string& key) -> std::optional<std::string> {
    auto it = kv.find(key);
    if (it == kv.end()) return std::nullopt;
    std::string v = it->second;
    kv.erase(it);
    return v;
  };
  auto finish = [&](NamedDistance d) {
    if (!kv.empty()) throw UnknownDistance("unknown parameter '" + kv.begin()->first + "' for " + name);
    return d;
  };

  if (name == "weighted_angle") {
    const auto rho = take("rho");
    const auto max_n = take("max_n");
    const double r = rho ? detail::parse_real("rho", *rho) : 0.5;
    const std::size_t m = max_n ? detail::parse_count("max_n", *max_n) : kHarnessMaxN;
    if (!(r > 0.0)) throw UnknownDistance("rho must be positive");
    if (max_n && r >= 1.0) throw UnknownDistance("max_n truncation requires rho < 1");
    return finish(weighted_angle_distance(r, m));
  }
  if (name == "kgram_angle" || name == "kgram_js") {
    const auto k_text = take("k");
    const std::size_t k = k_text ? detail::parse_count("k", *k_text) : 3;
    NamedDistance d{name, "k=" + std::to_string(k), false, {}};
    if (name == "kgram_angle") {
      d.fn = [k](const Str& s, const Str& t) { return baselines::kgram_angle(s, t, k); };
    } else {
      d.fn = [k](const Str& s, const Str& t) { return baselines::kgram_js(s, t, k); };
    }
    return finish(std::move(d));
  }
  if (name == "levenshtein") {
    return finish({name, "", true, [](const Str& s, const Str& t) {
                     return static_cast<double>(baselines::levenshtein(s, t));
                   }});
  }
  if (name == "damerau_levenshtein") {
    const auto variant = take("variant").value_or("full");
    baselines::DamerauVariant v;
    if (variant == "full") {
      v = baselines::DamerauVariant::unrestricted;
    } else if (variant == "osa") {
      v = baselines::DamerauVariant::optimal_string_alignment;
    } else {
      throw UnknownDistance("damerau_levenshtein variant must be full or osa");
    }
    return finish({name, variant == "full" ? "" : "variant=osa", true, [v](const Str& s, const Str& t) {
                     return static_cast<double>(baselines::damerau_levenshtein(s, t, v));
                   }});
  }
  if (name == "lcs") {
    return finish({name, "", true, [](const Str& s, const Str& t) {
                     return static_cast<double>(baselines::lcs_distance(s, t));
                   }});
  }
  throw UnknownDistance("unknown distance '" + name + "'; available: " + detail::roster_text());
}

}  // namespace wad
