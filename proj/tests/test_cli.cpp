#include <gtest/gtest.h>

#include "hyperpf/cli.hpp"

using namespace hyperpf;
using cli::RunConfig;

namespace {

const std::string kElliptic = R"({"n": 2, "hbar": {"var": "x", "coeffs": ["0", "1"]}})";

RunConfig config(const std::string& sub, const std::string& input = kElliptic) {
  RunConfig c;
  c.subcommand = sub;
  c.input_json = input;
  return c;
}

// Parses an argv the way the executable does.
RunConfig parse(std::vector<std::string> args) {
  CLI::App app;
  RunConfig cfg;
  cli::configure(app, cfg);
  std::vector<const char*> argv{"hyperpf"};
  for (const auto& a : args) argv.push_back(a.c_str());
  app.parse(static_cast<int>(argv.size()), const_cast<char**>(argv.data()));
  return cfg;
}

}  // namespace

TEST(Cli, AnalyzeElliptic) {
  const auto r = cli::run(config("analyze"));
  ASSERT_EQ(r.exit_code, 0) << r.error;
  const auto& res = r.report.at("result");
  EXPECT_TRUE(res.at("morse").get<bool>());
  EXPECT_EQ(res.at("genus").get<int>(), 1);
  std::vector<double> vals;
  for (const auto& v : res.at("critical_values")) vals.push_back(v.at("re").get<double>());
  std::sort(vals.begin(), vals.end());
  const double c = 2.0 / (3.0 * std::sqrt(3.0));
  ASSERT_EQ(vals.size(), 2u);
  EXPECT_NEAR(vals[0], -c, 1e-12);
  EXPECT_NEAR(vals[1], c, 1e-12);
  EXPECT_EQ(r.report.at("tool"), "hyperpf");
  EXPECT_EQ(r.report.at("status"), "pass");
}

TEST(Cli, BoundFive) {
  auto c = config("bound", "");
  c.n = 5;
  const auto r = cli::run(c);
  ASSERT_EQ(r.exit_code, 0) << r.error;
  EXPECT_EQ(r.report.at("result").at("multiplicity_bound").get<int>(), 14);
}

TEST(Cli, VerifyIdentitySixAtOne) {
  auto c = config("verify");
  c.identity = 6;
  c.t_values = {"1,0"};
  const auto r = cli::run(c);
  ASSERT_EQ(r.exit_code, 0) << r.error;
  const auto& s = r.report.at("result").at("samples");
  ASSERT_EQ(s.size(), 1u);
  EXPECT_LE(s[0].at("rel_err").get<double>(), 1e-6);
  EXPECT_EQ(r.report.at("result").at("deg_delta").get<int>(), 0);
}

TEST(Cli, RandomSamplesFollowSeed) {
  auto c = config("verify");
  c.samples = 2;
  c.seed = 11;
  const auto a = cli::run(c), b = cli::run(c);
  ASSERT_EQ(a.exit_code, 0) << a.error;
  EXPECT_EQ(a.report.at("result").at("samples"), b.report.at("result").at("samples"));
  c.seed = 12;
  const auto d = cli::run(c);
  EXPECT_NE(a.report.at("result").at("samples")[0].at("t"), d.report.at("result").at("samples")[0].at("t"));
}

TEST(Cli, MalformedJsonReportsOffset) {
  const auto r = cli::run(config("analyze", R"({"n": 2, "hbar": [0, 1)"));
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_NE(r.error.find("at byte"), std::string::npos) << r.error;
  EXPECT_EQ(r.report.at("status"), "error");
}

TEST(Cli, BadHamiltonianIsInputError) {
  const auto r = cli::run(config("analyze", R"({"n": 2, "hbar": ["1", "0", "1"]})"));
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_NE(r.error.find("exceeds"), std::string::npos) << r.error;
}

TEST(Cli, NearCriticalLevelRefused) {
  auto c = config("verify");
  c.t_values = {"0.3849001794597505,0"};
  const auto r = cli::run(c);
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_NE(r.error.find("distance"), std::string::npos) << r.error;
}

TEST(Cli, ReduceWithNumericCheck) {
  auto c = config("reduce", R"({"hamiltonian": {"n": 2, "hbar": ["0", "1"]},
                                "form": {"dx": [{"i": 3, "j": 1, "c": "1"}]}})");
  c.t_values = {"1,0.3"};
  const auto r = cli::run(c);
  ASSERT_EQ(r.exit_code, 0) << r.error;
  EXPECT_EQ(r.report.at("result").at("coeffs").size(), 2u);
}

TEST(Cli, ReduceNeedsForm) {
  EXPECT_EQ(cli::run(config("reduce")).exit_code, 1);
}

TEST(Cli, FailedCheckGivesExitTwo) {
  // A threshold above every normalized coefficient makes a nonzero
  // combination look flat.
  auto c = config("multiplicity", R"({"n": 3, "hbar": ["1/3", "-1", "1/2"]})");
  c.t_values = {"0.7,0.4"};
  c.vanish = 1;
  c.mult_tol = 10;
  const auto r = cli::run(c);
  EXPECT_EQ(r.exit_code, 2) << r.error;
  EXPECT_EQ(r.report.at("status"), "fail");
}

TEST(Cli, ExtendedPrecision) {
  auto c = config("periods");
  c.t_values = {"1"};
  c.precision = "extended";
  const auto r = cli::run(c);
  ASSERT_EQ(r.exit_code, 0) << r.error;
  EXPECT_EQ(r.report.at("precision"), "extended");
}

TEST(Cli, ArgvParsing) {
  const auto c = parse({"verify", "--json", kElliptic, "--identity", "3", "--t", "1,0", "--t", "2", "--seed", "7"});
  EXPECT_EQ(c.subcommand, "verify");
  EXPECT_EQ(c.identity, 3);
  EXPECT_EQ(c.t_values.size(), 2u);
  EXPECT_EQ(c.seed, 7u);
  EXPECT_THROW(parse({"verify", "--identity", "5"}), CLI::ParseError);
  EXPECT_THROW(parse({}), CLI::ParseError);
}
