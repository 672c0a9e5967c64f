#include <cstdio>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <json.hpp>

#include "cfsampler/cli.hpp"

using namespace cfsampler;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "cfsampler");
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

const std::string kPoisson1 = R"({"family":"poisson","params":{"lambda":1}})";

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> v;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) v.push_back(l);
  return v;
}

}  // namespace

TEST(Cli, SampleIsDeterministic) {
  const auto a = run_cli({"sample", "--dist", kPoisson1, "-n", "5", "--seed", "7"});
  const auto b = run_cli({"sample", "--dist", kPoisson1, "-n", "5", "--seed", "7"});
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  const auto l = lines(a.out);
  ASSERT_EQ(l.size(), 6u);
  EXPECT_EQ(l.back().rfind("# iterations=", 0), 0u);
}

TEST(Cli, DefaultSeedIsFixed) {
  const auto a = run_cli({"sample", "--dist", kPoisson1, "-n", "20"});
  const auto b = run_cli({"sample", "--dist", kPoisson1, "-n", "20"});
  EXPECT_EQ(a.out, b.out);
  const auto c = run_cli({"sample", "--dist", kPoisson1, "-n", "20", "--seed",
                          std::to_string(cli::kDefaultSeed)});
  EXPECT_EQ(a.out, c.out);
  EXPECT_EQ(run_cli({"sample", "--dist", kPoisson1, "--seed", "random"}).code, 0);
}

TEST(Cli, CsvAndJsonCarrySameValues) {
  const std::vector<std::string> base = {"sample", "--dist", kPoisson1, "-n", "50", "--seed", "3"};
  auto csv_args = base;
  auto json_args = base;
  json_args.insert(json_args.end(), {"--format", "json"});
  const auto csv = run_cli(csv_args);
  const auto js = run_cli(json_args);
  ASSERT_EQ(js.code, 0);
  const auto j = nlohmann::json::parse(js.out);
  const auto l = lines(csv.out);
  ASSERT_EQ(j["samples"].size(), 50u);
  for (std::size_t i = 0; i < 50; ++i) EXPECT_EQ(std::to_string(j["samples"][i].get<long>()), l[i]);
  const std::string stats = l.back();
  EXPECT_NE(stats.find("iterations=" + std::to_string(j["stats"]["iterations"].get<long>())),
            std::string::npos);
}

TEST(Cli, AcceptanceStatistics) {
  const auto r = run_cli({"sample", "--dist", kPoisson1, "-n", "100000", "--format", "json"});
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  const double rate = j["stats"]["acceptance_rate"];
  const double a = j["stats"]["envelope"]["A"];
  EXPECT_NEAR(a, 1.99, 0.02);
  EXPECT_NEAR(rate, 1.0 / a, 3 * std::sqrt((1 / a) * (1 - 1 / a) / (100000 * a)));
}

TEST(Cli, InvalidInputExitsTwo) {
  auto r = run_cli({"sample", "--dist",
                    R"({"family":"poisson-tweedie","params":{"a":0.5,"b":1,"c":1.5}})"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("c"), std::string::npos);
  EXPECT_EQ(run_cli({"sample", "--dist", "{oops"}).code, 2);
  EXPECT_EQ(run_cli({"sample", "--dist", kPoisson1, "--tol", "1e-3"}).code, 2);
  EXPECT_EQ(run_cli({"sample", "--dist", kPoisson1, "--m-rule", "median"}).code, 2);
  EXPECT_EQ(run_cli({"sample", "--dist", kPoisson1, "--format", "xml"}).code, 2);
  EXPECT_EQ(run_cli({"sample", "--dist", kPoisson1, "--seed", "-4"}).code, 2);
  EXPECT_EQ(run_cli({"sample", "--dist", kPoisson1, "-n", "0"}).code, 2);
  EXPECT_EQ(run_cli({"sample"}).code, 2);
  EXPECT_EQ(run_cli({"bogus"}).code, 2);
  EXPECT_EQ(run_cli({"sample", "--dist", "@/nonexistent/file.json"}).code, 2);
  EXPECT_EQ(run_cli({"envelope", "--dist",
                     R"({"family":"discrete-stable","params":{"a":0.5,"b":1}})"}).code, 2);
  EXPECT_EQ(run_cli({"table", "--family", "zeta"}).code, 2);
}

TEST(Cli, DistributionFromFile) {
  const std::string path = ::testing::TempDir() + "cli_dist.json";
  std::ofstream(path) << kPoisson1;
  const auto a = run_cli({"sample", "--dist", "@" + path, "-n", "10"});
  const auto b = run_cli({"sample", "--dist", kPoisson1, "-n", "10"});
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
}

TEST(Cli, Table) {
  auto r = run_cli({"table", "--family", "poisson", "--grid", "paper"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(lines(r.out).size(), 8u);
  r = run_cli({"table", "--family", "binomial", "--format", "json"});
  EXPECT_EQ(nlohmann::json::parse(r.out)["rows"].size(), 35u);
  r = run_cli({"table", "--family", "poisson-tweedie"});
  EXPECT_EQ(lines(r.out).size(), 51u);

  const std::string path = ::testing::TempDir() + "cli_grid.json";
  std::ofstream(path) << R"([{"n": 10, "p": 0.5}, {"n": "inf", "p": 0.1}])";
  r = run_cli({"table", "--family", "binomial", "--grid", "@" + path, "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  ASSERT_EQ(j["rows"].size(), 2u);
  EXPECT_NEAR(j["rows"][0]["A_star"].get<double>(), 1.73, 0.02);

  std::ofstream(path) << R"([{"lambda": -1}])";
  EXPECT_EQ(run_cli({"table", "--family", "poisson", "--grid", "@" + path}).code, 2);
  std::ofstream(path) << R"({"lambda": 1})";
  EXPECT_EQ(run_cli({"table", "--family", "poisson", "--grid", "@" + path}).code, 2);
  EXPECT_EQ(run_cli({"table", "--family", "poisson", "--grid", "other"}).code, 2);
}

TEST(Cli, Validate) {
  auto r = run_cli({"validate", "--dist", R"({"family":"poisson","params":{"lambda":10}})",
                    "--seed", "42", "-n", "100000"});
  EXPECT_EQ(r.code, 0) << r.out;
  r = run_cli({"validate", "--dist",
               R"({"family":"poisson-tweedie","params":{"a":0.5,"b":1,"c":0.5}})"});
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("strategy=inversion"), std::string::npos);
  r = run_cli({"validate", "--dist", R"({"family":"custom","weights":[1.0]})"});
  EXPECT_EQ(r.code, 0) << r.out;
}

TEST(Cli, Envelope) {
  auto r = run_cli({"envelope", "--dist", kPoisson1, "--format", "json"});
  ASSERT_EQ(r.code, 0);
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["m_star"], 1);
  EXPECT_EQ(j["m_mean"], 1);
  EXPECT_NEAR(j["A"].get<double>(), 1.99, 0.02);
  r = run_cli({"envelope", "--dist", R"({"family":"binomial","params":{"n":10,"p":0.5}})",
               "--format", "json"});
  j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["m_star"], 5);
  EXPECT_NEAR(j["A"].get<double>(), 1.73, 0.02);
  r = run_cli({"envelope", "--dist", R"({"family":"custom","weights":[1.0]})"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("degenerate"), std::string::npos);
}

TEST(Cli, BinaryOutputMatchesInProcess) {
  const std::string cmd = std::string(CFSAMPLER_CLI_PATH) +
                          " sample --dist '" + kPoisson1 + "' -n 25 --seed 11";
  FILE* pipe = ::popen(cmd.c_str(), "r");
  ASSERT_NE(pipe, nullptr);
  std::string out;
  char buf[4096];
  while (std::size_t k = std::fread(buf, 1, sizeof buf, pipe)) out.append(buf, k);
  EXPECT_EQ(::pclose(pipe), 0);
  EXPECT_EQ(out, run_cli({"sample", "--dist", kPoisson1, "-n", "25", "--seed", "11"}).out);
}
