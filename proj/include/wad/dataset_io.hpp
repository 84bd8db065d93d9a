#pragma once

// Labeled sequence datasets (TSV), the synthetic stutter benchmark, and the
// results CSV.

#include <array>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "wad/clustering.hpp"
#include "wad/strings.hpp"

namespace wad::io {

struct Record {
  std::string label;
  std::string sample_id;
  Str sequence;
};

class LabeledDataset {
 public:
  LabeledDataset(AlphabetPtr alphabet, std::vector<Record> records)
      : alphabet_(std::move(alphabet)), records_(std::move(records)) {
    std::set<std::string> ids;
    for (const auto& r : records_) {
      if (!ids.insert(r.sample_id).second) throw Error("duplicate sample_id '" + r.sample_id + "'");
      if (r.sequence.empty()) throw Error("empty sequence for sample_id '" + r.sample_id + "'");
    }
  }

  const Alphabet& alphabet() const noexcept { return *alphabet_; }
  const AlphabetPtr& alphabet_ptr() const noexcept { return alphabet_; }
  const std::vector<Record>& records() const noexcept { return records_; }
  std::size_t size() const noexcept { return records_.size(); }
  const Record& operator[](std::size_t i) const { return records_[i]; }

  /// Dense class ids in order of first appearance.
  clustering::ClusterLabels class_labels() const {
    std::map<std::string, int> ids;
    clustering::ClusterLabels out;
    out.reserve(records_.size());
    for (const auto& r : records_) {
      const auto [it, inserted] = ids.emplace(r.label, static_cast<int>(ids.size()));
      out.push_back(it->second);
    }
    return out;
  }

 private:
  AlphabetPtr alphabet_;
  std::vector<Record> records_;
};

namespace detail {

inline std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  for (;;) {
    const auto tab = line.find('\t', start);
    fields.push_back(line.substr(start, tab == std::string::npos ? std::string::npos : tab - start));
    if (tab == std::string::npos) return fields;
    start = tab + 1;
  }
}

inline std::string at_line(std::size_t line_no, const std::string& what) {
  return "line " + std::to_string(line_no) + ": " + what;
}

}  // namespace detail

/// Builds a dataset from raw (label, sample_id, sequence text) rows; the
/// alphabet is the sorted set of code points that occur.
inline LabeledDataset make_dataset(const std::vector<std::array<std::string, 3>>& rows) {
  std::set<std::string> symbols;
  for (const auto& row : rows) {
    for (auto& s : utf8_symbols(row[2])) symbols.insert(std::move(s));
  }
  if (symbols.empty()) throw Error("dataset has no symbols");
  auto alphabet = std::make_shared<const Alphabet>(std::vector<std::string>(symbols.begin(), symbols.end()));
  std::vector<Record> records;
  records.reserve(rows.size());
  for (const auto& row : rows) records.push_back({row[0], row[1], Str::parse(alphabet, row[2])});
  return LabeledDataset(std::move(alphabet), std::move(records));
}

inline LabeledDataset read_tsv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  auto next = [&]() -> bool {
    if (!std::getline(in, line)) return false;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  };
  if (!next()) throw Error("dataset is empty; expected header 'label<TAB>sample_id<TAB>sequence'");
  const auto header = detail::split_tabs(line);
  auto column = [&](const std::string& name) {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return i;
    }
    throw Error(detail::at_line(1, "missing column '" + name + "'"));
  };
  const std::size_t c_label = column("label");
  const std::size_t c_id = column("sample_id");
  const std::size_t c_seq = column("sequence");

  std::vector<std::array<std::string, 3>> rows;
  std::set<std::string> ids;
  while (next()) {
    if (line.empty()) continue;
    auto fields = detail::split_tabs(line);
    if (fields.size() != header.size()) {
      throw Error(detail::at_line(line_no, "expected " + std::to_string(header.size()) + " fields, found " +
                                               std::to_string(fields.size())));
    }
    if (fields[c_seq].empty()) throw Error(detail::at_line(line_no, "empty sequence"));
    if (!ids.insert(fields[c_id]).second) {
      throw Error(detail::at_line(line_no, "duplicate sample_id '" + fields[c_id] + "'"));
    }
    rows.push_back({std::move(fields[c_label]), std::move(fields[c_id]), std::move(fields[c_seq])});
  }
  return make_dataset(rows);
}

inline LabeledDataset load_tsv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open dataset '" + path.string() + "'");
  try {
    return read_tsv(in);
  } catch (const Error& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

inline void write_tsv(const LabeledDataset& data, std::ostream& out) {
  out << "label\tsample_id\tsequence\n";
  for (const auto& r : data.records()) out << r.label << '\t' << r.sample_id << '\t' << r.sequence.text() << '\n';
}

inline void write_tsv(const LabeledDataset& data, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write dataset '" + path.string() + "'");
  write_tsv(data, out);
  if (!out) throw Error("write failed for '" + path.string() + "'");
}

struct StutterSynthConfig {
  std::vector<std::string> motifs{"ab", "aab", "abb"};
  std::size_t r_min = 4;
  std::size_t r_max = 20;
  double mutation_rate = 0.02;
  std::size_t samples_per_class = 60;
  std::uint64_t seed = 7;

  void validate() const {
    if (motifs.empty()) throw Error("at least one motif is required");
    std::set<std::string> seen;
    for (const auto& m : motifs) {
      if (m.empty()) throw Error("motifs must be nonempty");
      if (!seen.insert(m).second) throw Error("motifs must be distinct");
    }
    if (r_min < 1 || r_max < r_min) throw Error("repeat range must satisfy 1 <= r_min <= r_max");
    if (!(mutation_rate >= 0.0 && mutation_rate < 1.0)) throw Error("mutation rate must lie in [0, 1)");
  }
};

/// For each motif, samples_per_class sequences motif^r with r uniform in
/// [r_min, r_max]; each symbol is then replaced, with probability
/// mutation_rate, by a different symbol drawn uniformly from the motifs'
/// symbols. Labels are the motifs, sample ids `<motif>_<i>`.
inline LabeledDataset synth_stutter(const StutterSynthConfig& cfg) {
  cfg.validate();
  std::set<std::string> symbol_set;
  for (const auto& m : cfg.motifs) {
    for (auto& s : utf8_symbols(m)) symbol_set.insert(std::move(s));
  }
  const std::vector<std::string> symbols(symbol_set.begin(), symbol_set.end());

  std::mt19937_64 rng(cfg.seed);
  std::uniform_int_distribution<std::size_t> repeats(cfg.r_min, cfg.r_max);
  std::bernoulli_distribution mutate(cfg.mutation_rate);
  std::vector<std::array<std::string, 3>> rows;
  for (const auto& motif : cfg.motifs) {
    const auto unit = utf8_symbols(motif);
    for (std::size_t i = 0; i < cfg.samples_per_class; ++i) {
      const std::size_t r = repeats(rng);
      std::string seq;
      for (std::size_t rep = 0; rep < r; ++rep) {
        for (const auto& sym : unit) {
          if (symbols.size() > 1 && mutate(rng)) {
            std::uniform_int_distribution<std::size_t> pick(0, symbols.size() - 2);
            std::size_t j = pick(rng);
            if (symbols[j] == sym) j = symbols.size() - 1;
            seq += symbols[j];
          } else {
            seq += sym;
          }
        }
      }
      rows.push_back({motif, motif + "_" + std::to_string(i), std::move(seq)});
    }
  }
  return make_dataset(rows);
}

/// Shortest round-trip decimal form of `x` (0.6 -> "0.6").
inline std::string shortest(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

struct ResultRow {
  std::string dataset;
  std::string distance;
  std::string params;
  clustering::TrialRecord trial;
};

inline constexpr const char* kResultsHeader =
    "dataset,distance,params,eps,min_samples,silhouette,n_clusters,noise_frac,ari,nmi,wall_time_s";

namespace detail {

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string fixed6(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", x);
  return buf;
}

}  // namespace detail

inline std::string format_result_row(const ResultRow& row) {
  const auto& t = row.trial;
  std::ostringstream out;
  out << detail::csv_field(row.dataset) << ',' << detail::csv_field(row.distance) << ','
      << detail::csv_field(row.params) << ',' << detail::fixed6(t.eps) << ',' << t.min_samples << ','
      << detail::fixed6(t.silhouette) << ',' << t.n_clusters << ',' << detail::fixed6(t.noise_frac) << ','
      << detail::fixed6(t.ari) << ',' << detail::fixed6(t.nmi) << ',' << detail::fixed6(t.wall_time_s);
  return out.str();
}

/// Appends rows; the header is written only when the file is new or empty.
inline void write_results_csv(const std::vector<ResultRow>& rows, const std::filesystem::path& path) {
  std::error_code ec;
  const bool fresh = !std::filesystem::exists(path, ec) || std::filesystem::file_size(path, ec) == 0;
  std::ofstream out(path, std::ios::binary | std::ios::app);
  if (!out) throw Error("cannot open results file '" + path.string() + "'");
  if (fresh) out << kResultsHeader << '\n';
  for (const auto& row : rows) out << format_result_row(row) << '\n';
  if (!out) throw Error("write failed for '" + path.string() + "'");
}

}  // namespace wad::io
