#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace {

struct Run {
  int status = -1;
  std::string out;
};

// Runs the CLI with stderr merged into stdout.
Run run(const std::string& args) {
  const std::string cmd = std::string(WAD_CLI_PATH) + " " + args + " 2>&1";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  char buf[4096];
  std::size_t n = 0;
  while ((n = fread(buf, 1, sizeof(buf), p)) > 0) r.out.append(buf, n);
  const int raw = pclose(p);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "wad_cli_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) out.push_back(line);
  return out;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
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

TEST(Cli, Dist) {
  auto r = run("dist --rho 0.5 ab ba");
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(r.out, "0.392699081699\n");
  r = run("dist --rho 0.5 x x");
  EXPECT_EQ(r.out, "0.000000000000\n");
  r = run("dist --rho 0.5 --max-n 2 abab baba");
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(r.out, "0.160875277198..0.553574358897\n");
}

TEST(Cli, DistFromFile) {
  const auto path = scratch("pair.txt");
  std::ofstream(path) << "ab\r\nba\r\n";
  const auto r = run("dist --rho 0.5 --input-file " + path.string());
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(r.out, "0.392699081699\n");
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run("dist --bogus").status, 2);
  EXPECT_EQ(run("").status, 2);
  EXPECT_EQ(run("dist --rho 0.5 ab").status, 2);
  EXPECT_EQ(run("dist --rho 2 --max-n 3 ab ba").status, 2);
  EXPECT_EQ(run("bounds --rho 1 --edit a b c").status, 2);
  const auto data = scratch("tiny.tsv");
  std::ofstream(data) << "label\tsample_id\tsequence\nx\ts1\tab\ny\ts2\tba\n";
  const auto r = run("matrix --distance hamming --input " + data.string() + " --output " + scratch("m.csv").string());
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.out.find("weighted_angle"), std::string::npos);
  EXPECT_NE(r.out.find("levenshtein"), std::string::npos);
}

TEST(Cli, BadDatasetReportsLine) {
  const auto data = scratch("dup.tsv");
  std::ofstream(data) << "label\tsample_id\tsequence\nx\ts1\tab\ny\ts1\tba\n";
  const auto r = run("matrix --distance lcs --input " + data.string() + " --output " + scratch("m.csv").string());
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.out.find("line 3"), std::string::npos);
}

TEST(Cli, MatrixIsSymmetric) {
  const auto data = scratch("synth_small.tsv");
  ASSERT_EQ(run("synth --per-class 4 --output " + data.string()).status, 0);
  const auto out = scratch("matrix.csv");
  ASSERT_EQ(run("matrix --distance weighted_angle:rho=0.6 --threads 2 --input " + data.string() + " --output " +
                out.string())
                .status,
            0);
  const auto rows = lines_of(read_file(out));
  ASSERT_EQ(rows.size(), 13u);
  std::vector<std::vector<std::string>> cells;
  for (const auto& row : rows) cells.push_back(split(row, ','));
  EXPECT_EQ(cells[0][0], "sample_id");
  for (std::size_t i = 1; i < cells.size(); ++i) {
    ASSERT_EQ(cells[i].size(), 13u);
    EXPECT_EQ(cells[i][0], cells[0][i]);
    EXPECT_EQ(cells[i][i], "0");
    for (std::size_t j = 1; j < cells.size(); ++j) EXPECT_EQ(cells[i][j], cells[j][i]);
  }
}

TEST(Cli, FromPeriodicGolden) {
  const auto r = run("measure from-periodic ab --depth 2");
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(r.out, read_file(std::filesystem::path(WAD_TEST_DATA) / "from_periodic_ab_depth2.txt"));
}

TEST(Cli, ApproximateAndInfeasible) {
  const auto sketch = scratch("aab.txt");
  ASSERT_EQ(run("measure from-periodic aab --depth 8 --output " + sketch.string()).status, 0);
  auto r = run("measure approx --sketch " + sketch.string() + " --eps 0.05 --rho 0.5");
  ASSERT_EQ(r.status, 0);
  const auto pos = r.out.find("upper_bound=");
  ASSERT_NE(pos, std::string::npos);
  EXPECT_LT(std::stod(r.out.substr(pos + 12)), 0.05);

  r = run("measure approx --sketch " + sketch.string() + " --eps 0.001 --rho 0.5");
  EXPECT_EQ(r.status, 3);
  EXPECT_NE(r.out.find("best bound"), std::string::npos);

  // beyond the sketch depth the string has no windows, so the value is exact
  r = run("measure dist --rho 0.5 @" + sketch.string() + " aab");
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(r.out.find(".."), std::string::npos);
  EXPECT_GT(std::stod(r.out), 0.0);

  const auto shallow = scratch("aab3.txt");
  ASSERT_EQ(run("measure from-periodic aab --depth 3 --output " + shallow.string()).status, 0);
  r = run("measure dist --rho 0.5 @" + shallow.string() + " @" + sketch.string());
  EXPECT_EQ(r.status, 0);
  EXPECT_NE(r.out.find(".."), std::string::npos);
}

TEST(Cli, Bounds) {
  auto r = run("bounds --rho 0.5 --edit abba ab c b");
  EXPECT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("insertion/deletion: distance="), std::string::npos);
  EXPECT_NE(r.out.find("substitution: distance="), std::string::npos);
  r = run("bounds --rho 0.5 --stutter ab ba a 3");
  EXPECT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("stutter: distance="), std::string::npos);
  EXPECT_EQ(run("bounds --rho 0.5 --stutter ab ba a 0").status, 2);
}

TEST(Cli, ClusterSweepIsDeterministic) {
  const auto data = scratch("synth_cluster.tsv");
  ASSERT_EQ(run("synth --per-class 8 --output " + data.string()).status, 0);
  const auto dir = scratch("plots");
  std::filesystem::remove_all(dir);
  std::vector<std::string> runs[2];
  for (int k = 0; k < 2; ++k) {
    const auto results = scratch("results" + std::to_string(k) + ".csv");
    std::filesystem::remove(results);
    const auto r = run("cluster --distance weighted_angle --sweep-rho --dataset toy --input " + data.string() +
                       " --results " + results.string() + " --plot-dir " + dir.string());
    ASSERT_EQ(r.status, 0) << r.out;
    const auto rows = lines_of(read_file(results));
    ASSERT_EQ(rows.size(), 11u);
    EXPECT_EQ(rows[0], "dataset,distance,params,eps,min_samples,silhouette,n_clusters,noise_frac,ari,nmi,wall_time_s");
    for (std::size_t i = 1; i < rows.size(); ++i) {
      auto fields = split(rows[i], ',');
      ASSERT_EQ(fields.size(), 11u);
      fields.pop_back();  // wall time
      std::string joined;
      for (const auto& f : fields) joined += f + ",";
      runs[k].push_back(joined);
    }
  }
  EXPECT_EQ(runs[0], runs[1]);
  EXPECT_EQ(runs[0].front().rfind("toy,weighted_angle,rho=0.1,", 0), 0u);
  const auto plot = lines_of(read_file(dir / "toy__weighted_angle__ari_nmi_vs_rho.csv"));
  EXPECT_EQ(plot.size(), 11u);
  EXPECT_EQ(run("cluster --distance lcs --sweep-rho --input " + data.string() + " --results " +
                scratch("r.csv").string())
                .status,
            2);
}
