#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "ninf/cli.hpp"
#include "ninf/discretization.hpp"

using namespace ninf;
namespace fs = std::filesystem;

namespace {

std::string data(const std::string& name) { return std::string(NINF_DATA_DIR) + "/" + name; }

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "ninf");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("ninf_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  static std::string slurp(const std::string& p) {
    std::ifstream in(p);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
  }
  fs::path dir_;
};

}  // namespace

TEST_F(Cli, SolveBall) {
  const auto r = run({"solve", "--domain", data("ball.dom"), "--f", "1", "--eps", "0.1", "--out", dir_.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto u = load_field(path("field.txt"), ConvexDomain::ball(Point(0, 0), 1));
  EXPECT_NEAR(u.interpolate(Point(0, 0)), 0.5, 0.05);
  EXPECT_FALSE(slurp(path("convergence.log")).empty());
}

TEST_F(Cli, SolveZeroSource) {
  const auto r = run({"solve", "--domain", data("interval.dom"), "--f", "0", "--output", path("zero.txt")});
  ASSERT_EQ(r.code, 0) << r.err;
  std::ifstream in(path("zero.txt"));
  const auto file = read_field_file(in);
  for (double v : file.values) EXPECT_EQ(v, 0.0);
}

TEST_F(Cli, ConfigErrors) {
  auto r = run({"solve", "--domain", data("square.dom"), "--f", "1", "--eps", "2.0", "--out", dir_.string()});
  EXPECT_EQ(r.code, exit_config);
  EXPECT_NE(r.err.find("eps"), std::string::npos);
  r = run({"solve", "--domain", path("missing.dom")});
  EXPECT_EQ(r.code, exit_config);
  r = run({"solve", "--domain", data("square.dom"), "--m", "7", "--out", dir_.string()});
  EXPECT_EQ(r.code, exit_config);
  EXPECT_NE(r.err.find("m:"), std::string::npos);
  r = run({"verify", "nonsense", "--domain", data("square.dom")});
  EXPECT_EQ(r.code, exit_config);
  std::ofstream(path("bad.dom")) << "shape = ball\ncenter = 0 0\n";
  r = run({"solve", "--domain", path("bad.dom")});
  EXPECT_EQ(r.code, exit_config);
  EXPECT_NE(r.err.find("radius"), std::string::npos);
}

TEST_F(Cli, NoConvergenceIsNumericFailure) {
  const auto r = run({"solve", "--domain", data("square.dom"), "--eps", "0.1", "--max-iter", "2", "--out", dir_.string()});
  EXPECT_EQ(r.code, exit_numeric);
}

TEST_F(Cli, ConfigFileAndOverride) {
  std::ofstream(path("run.cfg")) << "eps = 0.125\nf = 2\n";
  auto r = run({"solve", "--config", path("run.cfg"), "--domain", data("interval.dom"), "--output", path("a.txt")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("max_value: 1.12499"), std::string::npos);
  r = run({"solve", "--config", path("run.cfg"), "--domain", data("interval.dom"), "--f", "1", "--output", path("b.txt")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("max_value: 0.56249"), std::string::npos);
  std::ofstream(path("bad.cfg")) << "epsilon = 0.1\n";
  r = run({"solve", "--config", path("bad.cfg"), "--domain", data("interval.dom"), "--output", path("c.txt")});
  EXPECT_EQ(r.code, exit_config);
}

TEST_F(Cli, TowDeterministic) {
  const std::vector<std::string> args{"tow", "--domain", data("interval.dom"), "--eps", "0.125", "--trials", "5000", "--seed", "9", "--start", "0"};
  const auto a = run(args);
  const auto b = run(args);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out.find("exit_rate: 1\n"), std::string::npos);
}

TEST_F(Cli, TowBoundaryStart) {
  const auto r = run({"tow", "--domain", data("interval.dom"), "--eps", "0.125", "--trials", "10", "--start", "1"});
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("mean_payoff: 0\n"), std::string::npos);
}

TEST_F(Cli, TowNonExit) {
  const std::vector<std::string> args{"tow", "--domain", data("interval.dom"), "--eps", "0.125", "--trials", "200", "--max-steps", "5"};
  auto r = run(args);
  EXPECT_EQ(r.code, exit_numeric);
  EXPECT_NE(r.err.find("NonExit"), std::string::npos);
  auto allowed = args;
  allowed.push_back("--allow-nonexit");
  EXPECT_EQ(run(allowed).code, 0);
}

TEST_F(Cli, ReportSquare) {
  const auto r = run({"report", "--domain", data("square.dom"), "--eps", "0.1", "--refinements", "2", "--checks",
                      "concavity,cones,quadcone,semiconcavity", "--out", dir_.string(), "--svg", path("r.svg")});
  ASSERT_EQ(r.code, 0) << r.out << r.err;
  const auto text = slurp(path("report.txt"));
  EXPECT_NE(text.find("refinements: 2"), std::string::npos);
  EXPECT_NE(text.find("verdict: pass"), std::string::npos);
  EXPECT_NE(slurp(path("r.svg")).find("polyline"), std::string::npos);
}

TEST_F(Cli, VerifyKinkFieldFails) {
  const auto box = ConvexDomain::polygon({{-1, -1}, {1, -1}, {1, 1}, {-1, 1}});
  write_field(path("kink.txt"), ScalarField::sample(build_grid(box, 1.0 / 32), [](const Point& x) { return std::abs(x[0]); }));
  const auto r = run({"verify", "gradient", "--domain", data("box.dom"), "--field", path("kink.txt")});
  EXPECT_EQ(r.code, exit_verification);
  EXPECT_NE(r.out.find("gradient: fail"), std::string::npos);
}

TEST_F(Cli, SolveThenReportRoundTrip) {
  ASSERT_EQ(run({"solve", "--domain", data("square.dom"), "--eps", "0.1", "--sweep", "jacobi", "--out", dir_.string()}).code, 0);
  const auto stored = load_field(path("field.txt"), ConvexDomain::polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}}));
  SchemeParams p;
  p.eps = 0.1;
  p.sweep = Sweep::jacobi;
  const auto fresh = solve(ConvexDomain::polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}}), SourceTerm::constant(1.0), p);
  EXPECT_EQ(stored.values(), fresh.values());
  const auto r = run({"verify", "concavity", "--domain", data("square.dom"), "--field", path("field.txt")});
  EXPECT_EQ(r.code, 0) << r.out;
}

TEST_F(Cli, EnvelopeWritesSidecar) {
  const auto r = run({"envelope", "--domain", data("square.dom"), "--eps", "0.1", "--out", dir_.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(slurp(path("witness.txt")).rfind("# witness nx=", 0), 0u);
  EXPECT_EQ(slurp(path("envelope.txt")).rfind("# grid nx=", 0), 0u);
  EXPECT_NE(r.out.find("boundary_witness_nodes: 0"), std::string::npos);
}
