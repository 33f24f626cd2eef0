#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "gkmean/cli.hpp"
#include "oracles.hpp"

using namespace gkmean;
using json = nlohmann::json;

namespace {

const std::string kSamples = GKMEAN_SAMPLES_DIR;

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string sample(const std::string& name) { return kSamples + "/" + name; }

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "gkmean_cli_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

std::filesystem::path write_file(const std::string& name, const std::string& text) {
  const auto p = scratch(name);
  std::ofstream(p) << text;
  return p;
}

}  // namespace

TEST(Cli, MeanTwoTerm) {
  const auto r = run_cli({"mean", "--input", sample("two_term.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(r.out);
  EXPECT_EQ(j["command"], "mean");
  EXPECT_DOUBLE_EQ(j["results"]["M"][0].get<double>(), -1.0);
  EXPECT_DOUBLE_EQ(j["results"]["M"][1].get<double>(), 0.0);
  EXPECT_EQ(j["results"]["exact"]["M"], "-1");
  EXPECT_EQ(j["results"]["exact"]["A_first"], "2pi");
  EXPECT_EQ(j["tool"]["name"], "gkmean");
}

TEST(Cli, MeanQuadratic) {
  const auto r = run_cli({"mean", "--input", sample("quadratic.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(json::parse(r.out)["results"]["M"][0].get<double>(), 5.0, 1e-12);
}

TEST(Cli, DensityTwoTerm) {
  const auto r = run_cli({"density", "--input", sample("two_term.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(r.out);
  EXPECT_DOUBLE_EQ(j["results"]["mean_zero_count"].get<double>(), 1.0);
  EXPECT_EQ(j["results"]["mean_zero_count_exact"], "1");
}

TEST(Cli, DensityWithEmpiricalCount) {
  const auto r = run_cli({"density", "--input", sample("two_term.json"), "--R", "10"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(r.out)["results"]["empirical"];
  EXPECT_EQ(j["count"], 20);
  EXPECT_NEAR(j["empirical_density"].get<double>(), 1.0, 1e-12);
}

TEST(Cli, VerifySqrt2Passes) {
  const auto r = run_cli({"verify", "--input", sample("sqrt2.json"), "--R-list", "5,10,20,40"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(r.out)["results"];
  EXPECT_EQ(j["verdict"], "pass");
  EXPECT_LT(j["rows"].back()["abs_error"].get<double>(), 0.05);
  EXPECT_EQ(j["conserved"], true);
  EXPECT_EQ(j["fewnomial_ok"], true);
}

TEST(Cli, ZerosEmitPoints) {
  const auto points = scratch("points.csv");
  std::filesystem::remove(points);
  const auto r = run_cli({"zeros", "--input", sample("two_term.json"), "--R", "3", "--emit-points", points.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(json::parse(r.out)["results"]["zeros"].size(), 6u);
  std::ifstream in(points);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "re,im,multiplicity");
  int rows = 0;
  while (std::getline(in, line))
    if (!line.empty()) ++rows;
  EXPECT_EQ(rows, 6);
}

TEST(Cli, LaurentCheckAgrees) {
  const auto r = run_cli({"laurent-check", "--input", sample("half_frequency.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(r.out)["results"];
  EXPECT_EQ(j["q"], 2);
  EXPECT_LT(j["max_discrepancy"].get<double>(), 1e-9);
}

TEST(Cli, CsvFormat) {
  const auto r = run_cli({"mean", "--input", sample("two_term.json"), "--format", "csv"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.rfind("quantity,re,im\n", 0), 0u);
  EXPECT_NE(r.out.find("M,-1,0\n"), std::string::npos);
}

TEST(Cli, TimingOnlyWhenAsked) {
  const auto plain = json::parse(run_cli({"mean", "--input", sample("two_term.json")}).out);
  EXPECT_FALSE(plain.contains("timing"));
  const auto timed = json::parse(run_cli({"mean", "--input", sample("two_term.json"), "--timing"}).out);
  EXPECT_TRUE(timed.contains("timing"));
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run_cli({"mean", "--input", sample("two_term.json"), "--bogus"}).code, 2);
  EXPECT_EQ(run_cli({}).code, 2);
  EXPECT_EQ(run_cli({"mean"}).code, 2);
  EXPECT_EQ(run_cli({"mean", "--input", scratch("missing.json").string()}).code, 2);
  EXPECT_EQ(run_cli({"mean", "--input", write_file("bad.json", "{not json").string()}).code, 2);
  EXPECT_EQ(run_cli({"mean", "--input", write_file("extra.json", R"({"f": [], "h": 1})").string()}).code, 2);
  EXPECT_EQ(run_cli({"laurent-check", "--input", sample("sqrt2.json")}).code, 2);
  EXPECT_EQ(run_cli({"verify", "--input", sample("two_term.json"), "--R-list", "5"}).code, 2);

  const auto unusage = run_cli({"frobnicate"});
  EXPECT_EQ(unusage.code, 2);
  EXPECT_NE(unusage.err.find("Usage"), std::string::npos);

  // A frequency gap of 1e-15 pushes the strip bound past any usable width.
  const auto far = write_file("far.json", R"({"mode": "exact",
    "f": [{"coeff": [1, 0], "freq": "0"}, {"coeff": [1, 0], "freq": "1/1000000000000000"}]})");
  const auto r = run_cli({"zeros", "--input", far.string(), "--R", "1"});
  EXPECT_EQ(r.code, 3) << r.err;
}

TEST(Cli, ProblemRoundTripIsIdempotent) {
  for (const auto& name : {"two_term.json", "quadratic.json", "sqrt2.json", "support.json", "double_zero.json",
                           "half_frequency.json"}) {
    const auto p = ProblemFile::load(sample(name));
    const auto once = p.to_json();
    const auto twice = ProblemFile::from_json(once).to_json();
    EXPECT_EQ(once, twice) << name;
    EXPECT_EQ(dump_canonical(once), dump_canonical(twice)) << name;
  }
}

TEST(Cli, RandomProblemRoundTrip) {
  gkmean::testing::Generator gen(60);
  for (int trial = 0; trial < 50; ++trial) {
    ProblemFile p;
    p.basis = {"1", gkmean::testing::kSqrt2};
    p.mode = trial % 2 ? CoeffMode::Exact : CoeffMode::Float;
    for (int i = 0; i < 3; ++i)
      p.f.push_back({gen.rational(5, 4), gen.rational(5, 4), {gen.rational(3, 3), gen.rational(3, 3)}});
    if (trial % 3) p.g = std::vector<ProblemTerm>{{1, 0, {gen.rational(2, 2), 0}}};
    const auto once = ProblemFile::from_json(p.to_json()).to_json();
    EXPECT_EQ(ProblemFile::from_json(once).to_json(), once);
  }
}

TEST(Cli, DeterministicBytes) {
  const std::vector<std::string> args{"verify", "--input", sample("sqrt2.json"), "--R-list", "5,10", "--seed", "3"};
  const auto a = run_cli(args);
  const auto b = run_cli(args);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
}
