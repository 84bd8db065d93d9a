#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "wad/dataset_io.hpp"

using namespace wad;
using namespace wad::io;

namespace {

std::filesystem::path temp_path(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "wad_dataset_io_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

TEST(LoadTsv, WellFormed) {
  std::istringstream in("label\tsample_id\tsequence\nx\ts1\tACGT\nx\ts2\tAC\ny\ts3\tGGA\n");
  const auto data = read_tsv(in);
  ASSERT_EQ(data.size(), 3u);
  EXPECT_EQ(data[1].sample_id, "s2");
  EXPECT_EQ(data[2].sequence.text(), "GGA");
  EXPECT_EQ(data.alphabet().size(), 4u);
  EXPECT_EQ(data.class_labels(), (clustering::ClusterLabels{0, 0, 1}));
}

TEST(LoadTsv, ColumnsFoundByName) {
  std::istringstream in("sequence\tlabel\tsample_id\nab\tp\tq\n");
  const auto data = read_tsv(in);
  EXPECT_EQ(data[0].label, "p");
  EXPECT_EQ(data[0].sample_id, "q");
  EXPECT_EQ(data[0].sequence.text(), "ab");
}

TEST(LoadTsv, Errors) {
  std::istringstream dup("label\tsample_id\tsequence\nx\ts1\tab\nx\ts1\tba\n");
  try {
    read_tsv(dup);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("s1"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
  }
  std::istringstream missing("label\tsequence\nx\tab\n");
  EXPECT_THROW(read_tsv(missing), Error);
  std::istringstream empty_seq("label\tsample_id\tsequence\nx\ts1\t\n");
  EXPECT_THROW(read_tsv(empty_seq), Error);
  EXPECT_THROW(load_tsv(temp_path("does_not_exist.tsv")), Error);
}

TEST(LoadTsv, CrlfMatchesLf) {
  std::istringstream lf("label\tsample_id\tsequence\nx\ts1\tab\ny\ts2\tbba\n");
  std::istringstream crlf("label\tsample_id\tsequence\r\nx\ts1\tab\r\ny\ts2\tbba\r\n");
  const auto a = read_tsv(lf);
  const auto b = read_tsv(crlf);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].label, b[i].label);
    EXPECT_EQ(a[i].sample_id, b[i].sample_id);
    EXPECT_EQ(a[i].sequence.text(), b[i].sequence.text());
  }
}

TEST(Tsv, WriteThenLoadIsIdentity) {
  const auto data = synth_stutter({});
  const auto path = temp_path("roundtrip.tsv");
  write_tsv(data, path);
  const auto back = load_tsv(path);
  ASSERT_EQ(back.size(), data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    EXPECT_EQ(back[i].label, data[i].label);
    EXPECT_EQ(back[i].sample_id, data[i].sample_id);
    EXPECT_EQ(back[i].sequence.text(), data[i].sequence.text());
  }
}

TEST(SynthStutter, ClassesAndLengths) {
  StutterSynthConfig cfg;
  cfg.motifs = {"ab", "aab"};
  cfg.mutation_rate = 0.0;
  cfg.samples_per_class = 10;
  const auto data = synth_stutter(cfg);
  ASSERT_EQ(data.size(), 20u);
  for (const auto& r : data.records()) {
    const std::size_t unit = r.label.size();
    EXPECT_EQ(r.sequence.size() % unit, 0u);
    EXPECT_GE(r.sequence.size(), 4 * unit);
    EXPECT_LE(r.sequence.size(), 20 * unit);
    std::string expected;
    for (std::size_t i = 0; i < r.sequence.size() / unit; ++i) expected += r.label;
    EXPECT_EQ(r.sequence.text(), expected);
  }
}

TEST(SynthStutter, Deterministic) {
  const auto a = synth_stutter({});
  const auto b = synth_stutter({});
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].sequence.text(), b[i].sequence.text());
  StutterSynthConfig other;
  other.seed = 8;
  const auto c = synth_stutter(other);
  bool differs = false;
  for (std::size_t i = 0; i < a.size(); ++i) differs = differs || a[i].sequence.text() != c[i].sequence.text();
  EXPECT_TRUE(differs);
}

TEST(SynthStutter, MutationRate) {
  StutterSynthConfig cfg;
  cfg.motifs = {"ab"};
  cfg.r_min = 50;
  cfg.r_max = 50;
  cfg.samples_per_class = 100;
  cfg.mutation_rate = 0.05;
  const auto data = synth_stutter(cfg);
  double mutated = 0.0;
  double total = 0.0;
  for (const auto& r : data.records()) {
    const auto text = r.sequence.text();
    for (std::size_t i = 0; i < text.size(); ++i) {
      mutated += text[i] != "ab"[i % 2] ? 1.0 : 0.0;
      total += 1.0;
    }
  }
  const double sigma = std::sqrt(0.05 * 0.95 / total);
  EXPECT_NEAR(mutated / total, 0.05, 3 * sigma);
}

TEST(SynthStutter, InvalidConfig) {
  StutterSynthConfig cfg;
  cfg.motifs = {"ab", "ab"};
  EXPECT_THROW(synth_stutter(cfg), Error);
  cfg.motifs = {"ab"};
  cfg.r_min = 0;
  EXPECT_THROW(synth_stutter(cfg), Error);
  cfg.r_min = 2;
  cfg.mutation_rate = 1.0;
  EXPECT_THROW(synth_stutter(cfg), Error);
}

TEST(ResultsCsv, HeaderOnceAndRoundTrip) {
  const auto path = temp_path("results.csv");
  std::filesystem::remove(path);
  ResultRow row{"synth", "weighted_angle", "rho=" + shortest(0.6), {}};
  row.trial.eps = 0.125;
  row.trial.min_samples = 5;
  row.trial.silhouette = 0.5;
  row.trial.n_clusters = 3;
  row.trial.noise_frac = 0.1;
  row.trial.ari = 0.75;
  row.trial.nmi = 0.8;
  row.trial.wall_time_s = 1.5;
  write_results_csv({row}, path);
  write_results_csv({row}, path);
  std::istringstream in(read_file(path));
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(in, line)) lines.push_back(line);
  ASSERT_EQ(lines.size(), 3u);
  EXPECT_EQ(lines[0], kResultsHeader);
  EXPECT_EQ(lines[1], "synth,weighted_angle,rho=0.6,0.125000,5,0.500000,3,0.100000,0.750000,0.800000,1.500000");
  const auto fields = split_csv_line(lines[2]);
  ASSERT_EQ(fields.size(), 11u);
  EXPECT_EQ(fields[2], "rho=0.6");
  EXPECT_EQ(std::stod(fields[8]), 0.75);
}

TEST(Shortest, Format) {
  EXPECT_EQ(shortest(0.6), "0.6");
  EXPECT_EQ(shortest(0.1 * 3), "0.30000000000000004");
  EXPECT_EQ(shortest(1.0), "1");
}
