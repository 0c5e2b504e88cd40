// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli_dispatch.hpp"

using namespace gencep;
namespace fs = std::filesystem;

namespace {

struct Run {
  int status;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream o, e;
  const int s = cli::cli_dispatch(args, o, e);
  return {s, o.str(), e.str()};
}

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("gencep_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(is), {}};
}

}  // namespace

TEST(Cli, UsageErrors) {
  auto none = run({});
  EXPECT_EQ(none.status, 1);
  EXPECT_NE(none.err.find("Usage"), std::string::npos);
  EXPECT_EQ(run({"frobnicate"}).status, 1);
  EXPECT_EQ(run({"corr-sums", "--no-such-flag"}).status, 1);
  EXPECT_EQ(run({"moments"}).status, 1);  // --input is required
  EXPECT_EQ(run({"corr-sums", "--run", "/nonexistent/run.txt"}).status, 1);
  EXPECT_EQ(run({"--version"}).status, 0);
}

TEST(Cli, MissingInputFileIsUsageFailure) {
  const auto dir = scratch("missing");
  EXPECT_EQ(run({"moments", "--input", (dir / "nope.csv").string(), "--alpha", "0.5", "--out", dir.string()}).status, 1);
}

TEST(Cli, CorrectionFlagScalesCepstraByConstant) {
  const auto dir = scratch("correction");
  ASSERT_EQ(run({"simulate", "--system", "white-circular", "--N", "256", "--seed", "3", "--out", dir.string()}).status, 0);
  const auto rec = (dir / "record.csv").string();
  ASSERT_EQ(run({"moments", "--input", rec, "--alpha", "0.5", "--no-correction", "--out", (dir / "u").string()}).status, 0);
  auto r = run({"moments", "--input", rec, "--alpha", "0.5", "--correction", "--out", (dir / "c").string()});
  ASSERT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("correction = true"), std::string::npos);
  std::ifstream us(dir / "u" / "moments.csv"), cs(dir / "c" / "moments.csv");
  auto u = io::read_moments_csv(us), c = io::read_moments_csv(cs);
  const double cc = correction_constant(Alpha(0.5));
  ASSERT_EQ(u.cep.size(), c.cep.size());
  for (std::size_t i = 1; i < u.cep.size(); ++i) EXPECT_NEAR(std::abs(c.cep[i] - cc * u.cep[i]), 0.0, 1e-12);
  EXPECT_FALSE(u.cep.corrected);
  EXPECT_TRUE(c.cep.corrected);
}

TEST(Cli, RunFileValuesAreOverriddenByFlags) {
  const auto dir = scratch("runfile");
  {
    std::ofstream rf(dir / "run.txt");
    rf << "# correlation-sum settings\nNs = 16,32\nout = " << (dir / "from_file").string() << "\n";
  }
  auto r = run({"corr-sums", "--run", (dir / "run.txt").string(), "--Ns", "16,32,64"});
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_NE(r.out.find("Ns = 16,32,64"), std::string::npos) << r.out;
  const auto table = slurp(dir / "from_file" / "correlation_sums.csv");
  EXPECT_NE(table.find("\n64,"), std::string::npos);
}

TEST(Cli, CorrelationSumsDoNotGrow) {
  const auto dir = scratch("corr_sums");
  ASSERT_EQ(run({"corr-sums", "--Ns", "64,128,256,512", "--out", dir.string()}).status, 0);
  std::ifstream is(dir / "correlation_sums.csv");
  std::string line;
  std::getline(is, line);
  std::vector<double> at_three_quarters;
  while (std::getline(is, line)) {
    auto cells = io::detail::split(line);
    if (std::stoul(cells[1]) * 4 == 3 * std::stoul(cells[0])) at_three_quarters.push_back(std::stod(cells[2]));
  }
  ASSERT_EQ(at_three_quarters.size(), 4u);
  for (std::size_t i = 1; i < 4; ++i) EXPECT_LE(at_three_quarters[i], at_three_quarters[i - 1]);
}

TEST(Cli, ReproOneDWritesArtifactsDeterministically) {
  const auto a = scratch("repro_a"), b = scratch("repro_b");
  for (const auto& dir : {a, b}) {
    auto r = run({"repro", "one-d", "--N", "1000", "--seed", "7", "--step", "bb", "--out", dir.string()});
    ASSERT_EQ(r.status, 0) << r.err;
  }
  for (const char* f : {"moments.csv", "trace.csv", "model.json", "errors.csv"}) {
    ASSERT_TRUE(fs::exists(a / f)) << f;
    EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
  }
  EXPECT_TRUE(fs::exists(a / "manifest.json"));
  auto manifest = io::read_json((a / "manifest.json").string());
  EXPECT_EQ(manifest["seed"], 7);
}

TEST(Cli, SolverNonConvergenceExitsTwo) {
  const auto dir = scratch("nonconv");
  ASSERT_EQ(run({"simulate", "--system", "benchmark-1d", "--N", "600", "--out", dir.string()}).status, 0);
  ASSERT_EQ(run({"moments", "--input", (dir / "record.csv").string(), "--nu", "3", "--out", dir.string()}).status, 0);
  auto r = run({"solve", "--moments", (dir / "moments.csv").string(), "--nu", "3", "--max-iter", "2", "--out",
                dir.string()});
  EXPECT_EQ(r.status, 2);
}

TEST(Cli, SolveFactorIdentifyChain) {
  const auto dir = scratch("chain");
  ASSERT_EQ(run({"simulate", "--system", "benchmark-1d", "--N", "2000", "--seed", "4", "--out", dir.string()}).status, 0);
  ASSERT_EQ(run({"moments", "--input", (dir / "record.csv").string(), "--nu", "3", "--out", dir.string()}).status, 0);
  ASSERT_EQ(run({"solve", "--moments", (dir / "moments.csv").string(), "--nu", "3", "--real", "--step", "bb", "--grid",
                 "2000", "--out", dir.string()})
                .status,
            0);
  ASSERT_EQ(run({"factor", "--solution", (dir / "solution.json").string(), "--out", dir.string()}).status, 0);
  auto f = io::read_json((dir / "factor.json").string());
  EXPECT_TRUE(f["numerator"]["min_phase"].get<bool>());
  EXPECT_TRUE(f["denominator"]["min_phase"].get<bool>());
  ASSERT_EQ(run({"identify", "--input", (dir / "record.csv").string(), "--nu", "3", "--step", "bb", "--out",
                 (dir / "id").string()})
                .status,
            0);
  EXPECT_TRUE(fs::exists(dir / "id" / "model.json"));
}

TEST(Cli, McStudyReport) {
  const auto dir = scratch("mc");
  ASSERT_EQ(run({"mc-study", "--sizes", "64,128", "--trials", "20", "--out", dir.string()}).status, 0);
  const auto rep = slurp(dir / "report.csv");
  EXPECT_EQ(rep.rfind("N,k,", 0), 0u);
}
