// wad: command-line front end for the weighted angle distance library.
//
// Exit codes: 0 success, 2 usage or invalid input, 3 infeasible request,
// 1 internal invariant failure.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "wad/wad.hpp"

namespace {

using namespace wad;

constexpr int kExitUsage = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitInternal = 1;

std::string fixed12(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12f", x);
  return buf;
}

std::string fixed6(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", x);
  return buf;
}

std::string interval_text(const DistanceInterval& iv) {
  return iv.is_point() ? fixed12(iv.lo) : fixed12(iv.lo) + ".." + fixed12(iv.hi);
}

// Alphabet of the sorted code points occurring in `texts`.
AlphabetPtr infer_alphabet(const std::vector<std::string>& texts) {
  std::set<std::string> symbols;
  for (const auto& t : texts) {
    for (auto& s : utf8_symbols(t)) symbols.insert(std::move(s));
  }
  if (symbols.empty()) symbols.insert("a");
  return std::make_shared<const Alphabet>(std::vector<std::string>(symbols.begin(), symbols.end()));
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> read_lines(const std::string& path) {
  std::istringstream in(read_text(path));
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << text;
}

std::string shortest(double x) { return io::shortest(x); }

// ---------------------------------------------------------------------------
// dist

struct DistArgs {
  double rho = 0.0;
  std::size_t max_n = 0;
  std::string input_file;
  std::vector<std::string> strings;
};

int run_dist(const DistArgs& a) {
  std::vector<std::string> pair = a.strings;
  if (!a.input_file.empty()) {
    if (!pair.empty()) throw Error("give either two strings or --input-file, not both");
    pair = read_lines(a.input_file);
    while (pair.size() > 2 && pair.back().empty()) pair.pop_back();
  }
  if (pair.size() != 2) throw Error("dist needs exactly two strings");
  const auto alphabet = infer_alphabet(pair);
  const Str s = Str::parse(alphabet, pair[0]);
  const Str t = Str::parse(alphabet, pair[1]);
  const DistanceOptions opts =
      a.max_n > 0 ? DistanceOptions::truncated(a.rho, a.max_n) : DistanceOptions::exact(a.rho);
  std::cout << interval_text(dist(s, t, opts)) << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// matrix

struct MatrixArgs {
  std::string distance;
  std::string input;
  std::string output;
  std::size_t threads = 1;
};

clustering::DistanceMatrix build_matrix(const io::LabeledDataset& data, const NamedDistance& d,
                                        std::size_t threads) {
  return clustering::DistanceMatrix::build(
      data.size(), [&](std::size_t i, std::size_t j) { return d.fn(data[i].sequence, data[j].sequence); }, threads,
      d.name + (d.params.empty() ? "" : ":" + d.params));
}

int run_matrix(const MatrixArgs& a) {
  const auto d = parse_distance(a.distance);
  const auto data = io::load_tsv(a.input);
  const auto m = build_matrix(data, d, a.threads);
  std::ostringstream out;
  out << "sample_id";
  for (const auto& r : data.records()) out << ',' << r.sample_id;
  out << '\n';
  for (std::size_t i = 0; i < data.size(); ++i) {
    out << data[i].sample_id;
    for (std::size_t j = 0; j < data.size(); ++j) out << ',' << shortest(m(i, j));
    out << '\n';
  }
  write_text(a.output, out.str());
  return 0;
}

// ---------------------------------------------------------------------------
// cluster

struct ClusterArgs {
  std::string distance;
  std::string input;
  std::string results;
  std::string dataset;
  std::string plot_dir;
  bool sweep_rho = false;
  std::uint64_t seed = 0;
  std::size_t threads = 1;
};

int run_cluster(const ClusterArgs& a) {
  const auto base = parse_distance(a.distance);
  if (a.sweep_rho && base.name != "weighted_angle") throw Error("--sweep-rho applies only to weighted_angle");
  const auto data = io::load_tsv(a.input);
  const auto truth = data.class_labels();
  const std::string dataset = a.dataset.empty() ? std::filesystem::path(a.input).stem().string() : a.dataset;

  std::vector<NamedDistance> runs;
  if (a.sweep_rho) {
    std::size_t max_n = kHarnessMaxN;
    if (const auto pos = base.params.find("max_n="); pos != std::string::npos) {
      max_n = std::stoul(base.params.substr(pos + 6));
    }
    for (int i = 1; i <= 10; ++i) runs.push_back(weighted_angle_distance(i / 10.0, max_n));
  } else {
    runs.push_back(base);
  }

  std::vector<io::ResultRow> rows;
  std::vector<double> rhos;
  for (const auto& d : runs) {
    const auto m = build_matrix(data, d, a.threads);
    io::ResultRow row{dataset, d.name, d.params, clustering::evaluate(m, truth, a.seed, a.threads)};
    std::cout << dataset << ' ' << d.name << (d.params.empty() ? "" : " " + d.params) << " ari=" << fixed6(row.trial.ari)
              << " nmi=" << fixed6(row.trial.nmi) << " silhouette=" << fixed6(row.trial.silhouette)
              << " eps=" << fixed6(row.trial.eps) << " min_samples=" << row.trial.min_samples << "\n";
    rows.push_back(std::move(row));
  }
  io::write_results_csv(rows, a.results);

  if (base.name == "weighted_angle") {
    std::filesystem::path dir = a.plot_dir;
    if (dir.empty()) dir = std::filesystem::path(a.results).parent_path();
    if (!dir.empty()) std::filesystem::create_directories(dir);
    std::ostringstream plot;
    plot << "rho,ari,nmi,silhouette,eps,min_samples,n_clusters,noise_frac\n";
    std::size_t best = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto& t = rows[i].trial;
      plot << rows[i].params.substr(4, rows[i].params.find(';') - 4) << ',' << fixed6(t.ari) << ','
           << fixed6(t.nmi) << ',' << fixed6(t.silhouette) << ',' << fixed6(t.eps) << ',' << t.min_samples << ','
           << t.n_clusters << ',' << fixed6(t.noise_frac) << '\n';
      if (t.ari > rows[best].trial.ari) best = i;
    }
    write_text(dir / (dataset + "__" + base.name + "__ari_nmi_vs_rho.csv"), plot.str());
    if (a.sweep_rho) {
      std::cout << "best " << rows[best].params << " ari=" << fixed6(rows[best].trial.ari)
                << " nmi=" << fixed6(rows[best].trial.nmi) << "\n";
    }
  }
  return 0;
}

// ---------------------------------------------------------------------------
// bounds

struct BoundsArgs {
  double rho = 0.0;
  std::vector<std::string> edit;
  std::vector<std::string> stutter;
};

int report(const std::string& what, double distance, double bound) {
  const double slack = bound - distance;
  std::cout << what << ": distance=" << fixed12(distance) << " bound=" << fixed12(bound)
            << " slack=" << fixed12(slack) << "\n";
  return slack >= -1e-9 ? 0 : kExitInternal;
}

int run_bounds(const BoundsArgs& a) {
  if (!(a.rho > 0.0 && a.rho < 1.0)) throw Error("bounds require 0 < rho < 1");
  if (a.edit.empty() == a.stutter.empty()) throw Error("give exactly one of --edit or --stutter");
  int status = 0;
  if (!a.edit.empty()) {
    if (a.edit.size() < 3) throw Error("--edit takes P Q a [b]");
    const auto alphabet = infer_alphabet(a.edit);
    const Str p = Str::parse(alphabet, a.edit[0]);
    const Str q = Str::parse(alphabet, a.edit[1]);
    const Str x = Str::parse(alphabet, a.edit[2]);
    if (x.size() != 1) throw Error("the edited symbol must be a single character");
    const bounds::EditBoundInputs in{p.size(), q.size(), a.rho};
    status = std::max(status, report("insertion/deletion", dist(p + x + q, p + q, a.rho), bounds::insertion_bound(in)));
    if (a.edit.size() == 4) {
      const Str y = Str::parse(alphabet, a.edit[3]);
      if (y.size() != 1) throw Error("the substituted symbol must be a single character");
      status = std::max(status,
                        report("substitution", dist(p + x + q, p + y + q, a.rho), bounds::substitution_bound(in)));
    }
  } else {
    const auto alphabet = infer_alphabet({a.stutter[0], a.stutter[1], a.stutter[2]});
    const Str p1 = Str::parse(alphabet, a.stutter[0]);
    const Str q = Str::parse(alphabet, a.stutter[1]);
    const Str p2 = Str::parse(alphabet, a.stutter[2]);
    std::uint64_t ell = 0;
    try {
      ell = std::stoull(a.stutter[3]);
    } catch (const std::exception&) {
      throw Error("stutter repetition count must be a positive integer");
    }
    if (ell == 0) throw Error("stutter repetition count must be a positive integer");
    const bounds::StutterBoundInputs in{p1.size(), q.size(), p2.size(), ell, a.rho};
    status = report("stutter", dist(p1 + q + p2, p1 + q.repeat(ell) + p2, a.rho), bounds::stutter_bound(in));
  }
  std::cout << "uniform_bound=" << fixed12(bounds::uniform_bound(a.rho)) << "\n";
  return status;
}

// ---------------------------------------------------------------------------
// measure

struct MeasureArgs {
  std::string word;
  std::size_t depth = 0;
  std::string output;
  std::string sketch;
  double eps = 0.0;
  double rho = 0.0;
  std::uint64_t max_denominator = 1024;
  std::size_t max_length = std::size_t{1} << 20;
  std::vector<std::string> operands;
};

int run_from_periodic(const MeasureArgs& a) {
  const auto alphabet = infer_alphabet({a.word});
  const auto text = completion::serialize_sketch(completion::from_periodic(Str::parse(alphabet, a.word), a.depth));
  if (a.output.empty()) {
    std::cout << text;
  } else {
    write_text(a.output, text);
  }
  return 0;
}

int run_approx(const MeasureArgs& a) {
  const auto sketch = completion::parse_sketch(read_text(a.sketch));
  const auto result = completion::approximate_measure_by_string(sketch, a.eps, a.rho, {a.max_denominator, a.max_length});
  std::cout << result.string.text() << "\n";
  std::cout << "length=" << result.string.size() << " cycle_length=" << result.cycle_word.size()
            << " repetitions=" << result.repetitions << " denominator=" << result.denominator
            << " upper_bound=" << fixed12(result.upper_bound) << "\n";
  return 0;
}

// Operands are literal strings, or sketch files when prefixed with '@'.
int run_measure_dist(const MeasureArgs& a) {
  if (a.operands.size() != 2) throw Error("measure dist takes two operands");
  std::optional<completion::MeasureSketch> sketches[2];
  AlphabetPtr alphabet;
  for (int i = 0; i < 2; ++i) {
    if (a.operands[i].starts_with('@')) {
      sketches[i] = completion::parse_sketch(read_text(a.operands[i].substr(1)));
      if (alphabet && !(*alphabet == sketches[i]->alphabet())) throw Error("sketches use different alphabets");
      alphabet = sketches[i]->alphabet_ptr();
    }
  }
  if (!alphabet) alphabet = infer_alphabet(a.operands);
  auto point = [&](int i) -> completion::CompletionPoint {
    if (sketches[i]) return *sketches[i];
    return Str::parse(alphabet, a.operands[i]);
  };
  std::cout << interval_text(completion::extended_dist(point(0), point(1), a.rho)) << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// synth

struct SynthArgs {
  io::StutterSynthConfig cfg;
  std::string output;
};

int run_synth(const SynthArgs& a) {
  const auto data = io::synth_stutter(a.cfg);
  if (a.output.empty()) {
    io::write_tsv(data, std::cout);
  } else {
    io::write_tsv(data, std::filesystem::path(a.output));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weighted angle string distance: distances, matrices, clustering, bounds and completions"};
  app.require_subcommand(1);
  const std::size_t env_threads = default_threads();

  DistArgs dist_args;
  auto* dist_cmd = app.add_subcommand("dist", "Print d_rho(S, T), or an interval when truncated");
  dist_cmd->add_option("--rho", dist_args.rho, "Weight rho > 0")->required();
  dist_cmd->add_option("--max-n", dist_args.max_n, "Truncate at this scale (rho < 1)")->check(CLI::PositiveNumber);
  dist_cmd->add_option("--input-file", dist_args.input_file, "File with the two strings on two lines");
  dist_cmd->add_option("strings", dist_args.strings, "S and T");

  MatrixArgs matrix_args;
  matrix_args.threads = env_threads;
  auto* matrix_cmd = app.add_subcommand("matrix", "Write the pairwise distance matrix of a dataset as CSV");
  matrix_cmd->add_option("--distance", matrix_args.distance, "NAME[:key=value,...]")->required();
  matrix_cmd->add_option("--input", matrix_args.input, "Dataset TSV")->required();
  matrix_cmd->add_option("--output", matrix_args.output, "Matrix CSV")->required();
  matrix_cmd->add_option("--threads", matrix_args.threads, "Worker threads (default WAD_THREADS or 1)")
      ->check(CLI::PositiveNumber);

  ClusterArgs cluster_args;
  cluster_args.threads = env_threads;
  auto* cluster_cmd = app.add_subcommand("cluster", "Tune DBSCAN on a dataset and append results rows");
  cluster_cmd->add_option("--distance", cluster_args.distance, "NAME[:key=value,...]")->required();
  cluster_cmd->add_option("--input", cluster_args.input, "Dataset TSV")->required();
  cluster_cmd->add_option("--results", cluster_args.results, "results.csv to append to")->required();
  cluster_cmd->add_option("--dataset", cluster_args.dataset, "Dataset name (default: input file stem)");
  cluster_cmd->add_option("--plot-dir", cluster_args.plot_dir, "Directory for plot CSVs (default: results dir)");
  cluster_cmd->add_flag("--sweep-rho", cluster_args.sweep_rho, "Run rho = 0.1, 0.2, ..., 1.0");
  cluster_cmd->add_option("--seed", cluster_args.seed, "Seed recorded with the run");
  cluster_cmd->add_option("--threads", cluster_args.threads, "Worker threads (default WAD_THREADS or 1)")
      ->check(CLI::PositiveNumber);

  BoundsArgs bounds_args;
  auto* bounds_cmd = app.add_subcommand("bounds", "Compare an edit or stutter distance with its analytic bound");
  bounds_cmd->add_option("--rho", bounds_args.rho, "Weight, 0 < rho < 1")->required();
  bounds_cmd->add_option("--edit", bounds_args.edit, "P Q a [b]")->expected(3, 4);
  bounds_cmd->add_option("--stutter", bounds_args.stutter, "P1 Q P2 L")->expected(4);

  MeasureArgs measure_args;
  auto* measure_cmd = app.add_subcommand("measure", "Shift-invariant measure sketches");
  measure_cmd->require_subcommand(1);
  auto* periodic_cmd = measure_cmd->add_subcommand("from-periodic", "Sketch of the periodic measure of WORD");
  periodic_cmd->add_option("word", measure_args.word, "Period word")->required();
  periodic_cmd->add_option("--depth", measure_args.depth, "Sketch depth")->required()->check(CLI::PositiveNumber);
  periodic_cmd->add_option("--output", measure_args.output, "Write the sketch here instead of stdout");
  auto* approx_cmd = measure_cmd->add_subcommand("approx", "Find a string within eps of a sketch");
  approx_cmd->add_option("--sketch", measure_args.sketch, "Sketch file")->required();
  approx_cmd->add_option("--eps", measure_args.eps, "Target upper bound")->required();
  approx_cmd->add_option("--rho", measure_args.rho, "Weight, 0 < rho < 1")->required();
  approx_cmd->add_option("--max-denominator", measure_args.max_denominator, "Largest rounding denominator");
  approx_cmd->add_option("--max-length", measure_args.max_length, "Longest candidate string");
  auto* mdist_cmd = measure_cmd->add_subcommand("dist", "Extended distance; @FILE operands are sketches");
  mdist_cmd->add_option("--rho", measure_args.rho, "Weight, 0 < rho < 1")->required();
  mdist_cmd->add_option("operands", measure_args.operands, "Two strings or @sketch files")->expected(2);

  SynthArgs synth_args;
  auto* synth_cmd = app.add_subcommand("synth", "Generate the synthetic stutter benchmark as TSV");
  synth_cmd->add_option("--motifs", synth_args.cfg.motifs, "Comma-separated motifs")->delimiter(',');
  synth_cmd->add_option("--r-min", synth_args.cfg.r_min, "Fewest motif repeats");
  synth_cmd->add_option("--r-max", synth_args.cfg.r_max, "Most motif repeats");
  synth_cmd->add_option("--mutation", synth_args.cfg.mutation_rate, "Per-symbol substitution rate");
  synth_cmd->add_option("--per-class", synth_args.cfg.samples_per_class, "Samples per motif");
  synth_cmd->add_option("--seed", synth_args.cfg.seed, "Random seed");
  synth_cmd->add_option("--output", synth_args.output, "Output TSV (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*dist_cmd) return run_dist(dist_args);
    if (*matrix_cmd) return run_matrix(matrix_args);
    if (*cluster_cmd) return run_cluster(cluster_args);
    if (*bounds_cmd) return run_bounds(bounds_args);
    if (*periodic_cmd) return run_from_periodic(measure_args);
    if (*approx_cmd) return run_approx(measure_args);
    if (*mdist_cmd) return run_measure_dist(measure_args);
    if (*synth_cmd) return run_synth(synth_args);
  } catch (const completion::InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << "; best bound " << fixed12(e.best_bound()) << "\n";
    return kExitInfeasible;
  } catch (const UnknownDistance& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitInternal;
}
