#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <locale>
#include <sstream>

#include <json.hpp>

#include "xyness/cli.hpp"

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "xyness");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = xyness::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> data_lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream is(text);
  for (std::string line; std::getline(is, line);)
    if (!line.empty() && line[0] != '#') out.push_back(line);
  return out;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

const std::vector<std::string> kBase{"--gamma", "0.5", "--lambda", "0.3", "--beta-l", "1", "--beta-r", "3"};

std::vector<std::string> with(std::vector<std::string> head, std::vector<std::string> tail) {
  head.insert(head.end(), tail.begin(), tail.end());
  return head;
}

}  // namespace

TEST(Cli, CorrelationsCsvLayout) {
  const auto r = run(with({"correlations"}, with(kBase, {"--n-max", "32"})));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("# swapped=false"), std::string::npos);
  EXPECT_NE(r.out.find("# version="), std::string::npos);
  EXPECT_NE(r.out.find("# theorem_rate=-6.42230519526"), std::string::npos);
  EXPECT_EQ(r.out.find('\r'), std::string::npos);
  const auto lines = data_lines(r.out);
  ASSERT_GE(lines.size(), 2u);
  EXPECT_EQ(lines[0], "n,log_abs_C,log_abs_det,pf_det_residual,smin,smax,weak_bound_log,theorem_rate_times_n");
  // default n list for n_max = 32: 8, 16, 18, 20, ..., 32
  EXPECT_EQ(lines.size() - 1, xyness::default_n_list(32).size());
  EXPECT_EQ(lines[1].substr(0, 2), "8,");
  // 17 significant digits in scientific notation
  const std::string first = lines[1].substr(2, lines[1].find(',', 2) - 2);
  EXPECT_EQ(first.size(), std::string("-1.2345678901234567e+00").size());
}

TEST(Cli, ExplicitNList) {
  const auto r = run(with({"correlations"}, with(kBase, {"--n-list", "1,2,3,5"})));
  ASSERT_EQ(r.code, 0) << r.err;
  const auto lines = data_lines(r.out);
  ASSERT_EQ(lines.size(), 5u);
  EXPECT_EQ(lines[4].substr(0, 2), "5,");
}

TEST(Cli, DeterministicFiles) {
  const std::string dir = ::testing::TempDir();
  const std::string a = dir + "xy_a.csv", b = dir + "xy_b.csv";
  ASSERT_EQ(run(with({"correlations"}, with(kBase, {"--n-max", "24", "--out", a}))).code, 0);
  ASSERT_EQ(run(with({"correlations"}, with(kBase, {"--n-max", "24", "--out", b}))).code, 0);
  const std::string ta = slurp(a), tb = slurp(b);
  EXPECT_FALSE(ta.empty());
  EXPECT_EQ(ta, tb);
  std::filesystem::remove(a);
  std::filesystem::remove(b);
}

TEST(Cli, SwappedReservoirsSameColumns) {
  const auto a = run({"correlations", "--beta-l", "1", "--beta-r", "3", "--n-max", "16"});
  const auto b = run({"correlations", "--beta-l", "3", "--beta-r", "1", "--n-max", "16"});
  ASSERT_EQ(a.code, 0);
  ASSERT_EQ(b.code, 0);
  EXPECT_NE(b.out.find("# swapped=true"), std::string::npos);
  EXPECT_EQ(data_lines(a.out), data_lines(b.out));
}

TEST(Cli, LocaleIndependent) {
  struct Grouping : std::numpunct<char> {
    char do_decimal_point() const override { return ','; }
    char do_thousands_sep() const override { return '.'; }
    std::string do_grouping() const override { return "\1"; }
  };
  const std::locale old = std::locale::global(std::locale(std::locale::classic(), new Grouping));
  const auto r = run(with({"spectrum"}, with(kBase, {"--n-list", "16,32"})));
  std::locale::global(old);
  ASSERT_EQ(r.code, 0);
  const auto lines = data_lines(r.out);
  ASSERT_EQ(lines.size(), 3u);
  EXPECT_EQ(lines[1].substr(0, 3), "16,");
  EXPECT_EQ(lines[2].substr(0, 3), "32,");
}

TEST(Cli, JsonlOutput) {
  const auto r = run(with({"correlations"}, with(kBase, {"--n-list", "2,4", "--format", "jsonl"})));
  ASSERT_EQ(r.code, 0);
  std::istringstream is(r.out);
  std::vector<nlohmann::json> rows;
  for (std::string line; std::getline(is, line);) rows.push_back(nlohmann::json::parse(line));
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0]["type"], "meta");
  EXPECT_EQ(rows[2]["n"], 4);
  EXPECT_LT(rows[2]["log_abs_C"].get<double>(), 0);
}

TEST(Cli, Spectrum) {
  const auto r = run(with({"spectrum"}, with(kBase, {"--n-list", "16,32,64", "--eps", "1e-6"})));
  ASSERT_EQ(r.code, 0) << r.err;
  const auto lines = data_lines(r.out);
  ASSERT_EQ(lines.size(), 4u);
  double prev_gap = 1;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    std::vector<std::string> f;
    std::stringstream ss(lines[i]);
    for (std::string c; std::getline(ss, c, ',');) f.push_back(c);
    ASSERT_EQ(f.size(), 10u);
    EXPECT_EQ(f[3], "0");
    const double gap = std::stod(f[9]);
    EXPECT_LE(gap, prev_gap);
    prev_gap = gap;
  }
}

TEST(Cli, Bound) {
  auto r = run({"bound", "--gamma", "0", "--lambda", "0.5", "--beta-l", "1", "--beta-r", "3"});
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("critical=true"), std::string::npos);
  EXPECT_NE(r.out.find("theorem_rate=-1.03364200"), std::string::npos);
  r = run({"bound", "--beta-l", "2", "--beta-r", "2"});
  EXPECT_NE(r.out.find("equilibrium=true"), std::string::npos);
  r = run({"bound", "--format", "jsonl"});
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_LT(j["theorem_rate"].get<double>(), 0);
}

TEST(Cli, Sweep) {
  const auto r = run({"sweep", "--gamma", "0.5", "--lambda", "0.3,0.5", "--beta-l", "1,2", "--beta-r", "2",
                      "--n-list", "2,4"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("# points=4"), std::string::npos);
  EXPECT_EQ(data_lines(r.out).size(), 1u + 4 * 2);
  const auto crit = run({"sweep", "--gamma", "0", "--lambda", "0.5", "--n-list", "2,4"});
  EXPECT_EQ(crit.code, 0);
  EXPECT_NE(crit.out.find("critical=true"), std::string::npos);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"correlations", "--gamma", "1.5"}).code, 2);
  EXPECT_EQ(run({"correlations", "--beta-l", "-1"}).code, 2);
  EXPECT_EQ(run({"correlations", "--gamma", "abc"}).code, 2);
  EXPECT_EQ(run({"correlations", "--n-list", "4,2"}).code, 2);
  EXPECT_EQ(run({"correlations", "--n-max", "0"}).code, 2);
  EXPECT_EQ(run({"correlations", "--format", "xml"}).code, 2);
  EXPECT_EQ(run({"correlations", "--tol", "-1"}).code, 2);
  EXPECT_EQ(run({"spectrum", "--eps", "2"}).code, 2);
  EXPECT_EQ(run({"sweep", "--gamma", "0.5,2"}).code, 2);
  EXPECT_EQ(run({"selftest", "--inject", "nonsense"}).code, 2);
  const auto r = run({"correlations", "--gamma", "1.5"});
  EXPECT_NE(r.err.find("gamma"), std::string::npos);
}

TEST(Cli, HelpIsSuccess) {
  const auto r = run({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("correlations"), std::string::npos);
}

TEST(Cli, NumericalFailureExitCode) {
  const auto r = run(with({"correlations"}, with(kBase, {"--n-list", "2", "--tol", "1e-300"})));
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("fourier"), std::string::npos);
  EXPECT_NE(r.err.find("x="), std::string::npos);
}

TEST(Cli, DumpMatrices) {
  const std::string prefix = ::testing::TempDir() + "cli_dump";
  ASSERT_EQ(run(with({"correlations"}, with(kBase, {"--n-list", "1,2", "--dump-matrices", "--out", prefix}))).code, 0);
  EXPECT_TRUE(std::filesystem::exists(prefix + "_n1.bin"));
  EXPECT_EQ(std::filesystem::file_size(prefix + "_n2.bin"), 16u * 16);
  for (const char* f : {"", "_n1.bin", "_n2.bin"}) std::filesystem::remove(prefix + f);
}

TEST(Cli, Selftest) {
  const auto ok = run({"selftest"});
  EXPECT_EQ(ok.code, 0) << ok.out;
  EXPECT_EQ(ok.out.find("FAIL"), std::string::npos);

  const auto sign = run({"selftest", "--inject", "assembly-sign"});
  EXPECT_EQ(sign.code, 1);
  EXPECT_NE(sign.out.find("FAIL  Omega(n) skew-symmetric"), std::string::npos);

  const auto phi = run({"selftest", "--inject", "phi-identity"});
  EXPECT_EQ(phi.code, 1);
  EXPECT_NE(phi.out.find("FAIL  symbol singular values"), std::string::npos);
}
