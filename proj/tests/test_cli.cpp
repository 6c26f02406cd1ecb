#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "qkr/cli.hpp"

using namespace qkr;
namespace fs = std::filesystem;

namespace {

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("qkr_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  int run(std::vector<std::string> args, const std::string& sub = "out") {
    args.push_back("--out");
    args.push_back((dir_ / sub).string());
    out_.str("");
    err_.str("");
    return cli::run(args, out_, err_);
  }

  nlohmann::json json(const std::string& file, const std::string& sub = "out") const {
    std::ifstream in(dir_ / sub / file);
    return nlohmann::json::parse(in);
  }

  std::string slurp(const fs::path& p) const {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
  }

  fs::path dir_;
  std::ostringstream out_, err_;
};

}  // namespace

TEST_F(CliTest, PrepareDefaultsOptimizeTowardPresetD) {
  ASSERT_EQ(run({"prepare"}), 0) << err_.str();
  const auto j = json("coefficients.json");
  EXPECT_EQ(j["source"], "optimized");
  EXPECT_NEAR(j["coefficients"][0]["re"].get<double>(), 0.4815, 0.05);
  EXPECT_NEAR(j["coefficients"][1]["re"].get<double>(), 0.7323, 0.05);
  EXPECT_NEAR(j["coefficients"][2]["re"].get<double>(), 0.4815, 0.05);
  EXPECT_LE(j["cost"].get<double>(), j["baseline_cost"].get<double>());
  EXPECT_DOUBLE_EQ(j["calibrated_k"].get<double>(), cli::calibrated_kick_strength);
  for (const char* f : {"distribution.csv", "prepare_distributions.svg", "prepare_roundtrip.svg"})
    EXPECT_TRUE(fs::exists(dir_ / "out" / f)) << f;
}

TEST_F(CliTest, PreparePresetSkipsOptimization) {
  ASSERT_EQ(run({"prepare", "--preset", "b"}), 0) << err_.str();
  EXPECT_EQ(json("coefficients.json")["source"], "preset b");
  const auto dists = io::read_timeseries_csv(dir_ / "out" / "distribution.csv");
  ASSERT_EQ(dists.count(15), 1u);
  const auto& d = dists.at(15);
  for (int n = -10; n <= 10; ++n) EXPECT_GT(d[n], 0.3 / 21.0) << n;
}

TEST_F(CliTest, InvalidInputsAreConfigErrors) {
  EXPECT_EQ(run({"prepare", "--k", "-1"}), 2);
  EXPECT_NE(err_.str().find("k:"), std::string::npos);
  EXPECT_EQ(run({"search", "--window", "10"}), 2);
  EXPECT_EQ(run({"search", "--strategy", "magic"}), 2);
  EXPECT_EQ(run({"search", "--preset", "z"}), 2);
  EXPECT_EQ(run({"search", "--flat-window", "7"}), 2);
  EXPECT_EQ(run({"search", "--target", "1,2"}), 2);
  EXPECT_EQ(run({"search", "--target", "x"}), 2);
  EXPECT_EQ(run({"sweep", "--target", ""}), 2);
  EXPECT_EQ(run({"--k", "1"}), 2);  // no subcommand
}

TEST_F(CliTest, SearchReportsTargetByBothMethods) {
  ASSERT_EQ(run({"search", "--target", "5"}), 0) << err_.str();
  const auto j = json("summary.json");
  EXPECT_EQ(j["estimates"]["flank"]["n_hat"], 5);
  EXPECT_EQ(j["estimates"]["refocus"]["n_hat"], 5);
  EXPECT_NEAR(j["weights"]["final_at_target"].get<double>(), 0.0927, 1e-3);
  ASSERT_EQ(j["events"].size(), 2u);
  EXPECT_EQ(j["events"][0]["kind"], "mark");
  EXPECT_EQ(j["events"][1]["kind"], "cut");
  for (const char* key : {"params", "calibrated_k", "estimates", "weights", "events", "fidelity"})
    EXPECT_TRUE(j.contains(key)) << key;
  for (const char* f : {"timeseries.csv", "reference_timeseries.csv", "suppressed.csv", "search_evolution.svg",
                        "search_suppressed.svg", "search_refocus.svg", "search_final.svg"})
    EXPECT_TRUE(fs::exists(dir_ / "out" / f)) << f;
}

TEST_F(CliTest, SearchWithoutOracleReportsRoundTrip) {
  ASSERT_EQ(run({"search", "--no-oracle"}), 0) << err_.str();
  const auto j = json("summary.json");
  EXPECT_GE(j["fidelity"].get<double>(), 1.0 - 1e-10);
  EXPECT_TRUE(j["estimates"]["flank"].is_null());
}

TEST_F(CliTest, SubtractStrategyEmitsSuppressedDistribution) {
  ASSERT_EQ(run({"search", "--strategy", "subtract"}), 0) << err_.str();
  const auto j = json("summary.json");
  EXPECT_EQ(j["params"]["strategy"], "subtract");
  EXPECT_EQ(j["estimates"]["flank"]["n_hat"], 5);
  EXPECT_TRUE(j["estimates"]["refocus"].is_null());
  const auto dists = io::read_timeseries_csv(dir_ / "out" / "suppressed.csv");
  ASSERT_EQ(dists.count(30), 1u);
  EXPECT_GT(dists.at(30).total_mass(), 0.0);
}

TEST_F(CliTest, EstimationFailureExitsWithOne) {
  EXPECT_EQ(run({"search", "--wcut", "56"}), 1);
  const auto j = json("summary.json");
  EXPECT_TRUE(j["estimates"]["refocus"].contains("error"));
}

TEST_F(CliTest, TimeSeriesCsvRoundTripsExactly) {
  ASSERT_EQ(run({"search", "--target", "-6"}), 0);
  const auto text = slurp(dir_ / "out" / "timeseries.csv");
  EXPECT_EQ(text.rfind("t,n,probability\n", 0), 0u);
  const auto dists = io::read_timeseries_csv(dir_ / "out" / "timeseries.csv");
  cli::ExperimentConfig cfg;
  cfg.targets = "-6";
  SearchOptions opt;
  opt.target = -6;
  const auto rec = run_search(cfg.walk_params(), cfg.initial(), opt);
  ASSERT_EQ(dists.size(), rec.distributions.size());
  for (const auto& [t, d] : dists)
    for (int n = -d.halfwidth(); n <= d.halfwidth(); ++n)
      ASSERT_EQ(d[n], rec.distributions[static_cast<std::size_t>(t)][n]) << t << "," << n;
}

TEST_F(CliTest, RepeatedSearchIsByteIdentical) {
  ASSERT_EQ(run({"search", "--target", "7", "--seed", "3"}, "a"), 0);
  ASSERT_EQ(run({"search", "--target", "7", "--seed", "3"}, "b"), 0);
  for (const auto& entry : fs::directory_iterator(dir_ / "a"))
    EXPECT_EQ(slurp(entry.path()), slurp(dir_ / "b" / entry.path().filename())) << entry.path().filename();
}

TEST_F(CliTest, SweepTableIsSortedAndComplete) {
  ASSERT_EQ(run({"sweep", "--target=-10..10"}), 0) << err_.str();
  std::ifstream in(dir_ / "out" / "sweep.csv");
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "k,n_t,n_hat_flank,flank_ok,n_hat_refocus,refocus_ok,weight");
  int rows = 0, previous = -100;
  while (std::getline(in, line)) {
    ++rows;
    std::istringstream f(line);
    std::string k, nt, fl, flok, rf, rfok;
    std::getline(f, k, ',');
    std::getline(f, nt, ',');
    std::getline(f, fl, ',');
    std::getline(f, flok, ',');
    std::getline(f, rf, ',');
    std::getline(f, rfok, ',');
    EXPECT_GT(std::stoi(nt), previous);
    previous = std::stoi(nt);
    if (std::abs(previous) <= 8) EXPECT_EQ(rfok, "true") << line;
  }
  EXPECT_EQ(rows, 21);
}

TEST_F(CliTest, SingleCellSweepMatchesSearch) {
  ASSERT_EQ(run({"sweep", "--target", "4"}, "sweep"), 0);
  ASSERT_EQ(run({"search", "--target", "4"}, "search"), 0);
  const auto j = json("summary.json", "search");
  std::ifstream in(dir_ / "sweep" / "sweep.csv");
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  const auto weight = j["weights"]["final_at_target"].get<double>();
  EXPECT_EQ(row, fmt::format("0.8775,4,{},true,{},true,{}", j["estimates"]["flank"]["n_hat"].get<int>(),
                             j["estimates"]["refocus"]["n_hat"].get<int>(), io::exact(weight)));
}

TEST_F(CliTest, SweepOverSeveralKicksSortsByK) {
  ASSERT_EQ(run({"sweep", "--target", "3,5", "--ks", "0.9,0.8775"}), 0) << err_.str();
  std::ifstream in(dir_ / "out" / "sweep.csv");
  std::string line;
  std::vector<std::string> rows;
  std::getline(in, line);
  while (std::getline(in, line)) rows.push_back(line.substr(0, line.find(',', line.find(',') + 1)));
  EXPECT_EQ(rows, (std::vector<std::string>{"0.8775,3", "0.8775,5", "0.9,3", "0.9,5"}));
}

TEST_F(CliTest, ScalingReportsFitAndSlope) {
  ASSERT_EQ(run({"scaling", "--k", "1", "--t-max", "128"}), 0) << err_.str();
  const auto j = json("scaling.json");
  const double exponent = j["fitted_survival_exponent"].get<double>();
  EXPECT_GE(exponent, -1.15);
  EXPECT_LE(exponent, -0.85);
  EXPECT_NEAR(j["fitted_width_slope"].get<double>(), 1.0 / std::sqrt(2.0), 1e-9);
  EXPECT_TRUE(fs::exists(dir_ / "out" / "scaling.csv"));
  EXPECT_TRUE(fs::exists(dir_ / "out" / "scaling_survival.svg"));
}

TEST_F(CliTest, ScalingSinglePointWarns) {
  ASSERT_EQ(run({"scaling", "--k", "1", "--t-max", "1"}), 0) << err_.str();
  const auto j = json("scaling.json");
  EXPECT_TRUE(j["fitted_survival_exponent"].is_null());
  EXPECT_FALSE(j["warnings"].empty());
  EXPECT_EQ(j["times"].size(), 2u);
  EXPECT_NE(out_.str().find("warning"), std::string::npos);
}

TEST_F(CliTest, ConfigFileWithFlagOverrides) {
  const auto cfg = dir_ / "run.cfg";
  std::ofstream(cfg) << "# search settings\nk = 0.8775\nkicks = 15\ntarget = 7\nwcut = 3\n";
  ASSERT_EQ(run({"search", "--config", cfg.string()}), 0) << err_.str();
  EXPECT_EQ(json("summary.json")["params"]["target"], 7);
  ASSERT_EQ(run({"search", "--config", cfg.string(), "--target=-3"}), 0) << err_.str();
  EXPECT_EQ(json("summary.json")["params"]["target"], -3);

  std::ofstream(cfg) << "k = 0.8775\nbogus = 1\n";
  EXPECT_EQ(run({"search", "--config", cfg.string()}), 2);
  EXPECT_NE(err_.str().find("bogus"), std::string::npos);
  std::ofstream(cfg) << "kicks = many\n";
  EXPECT_EQ(run({"search", "--config", cfg.string()}), 2);
  EXPECT_NE(err_.str().find("kicks"), std::string::npos);
}

TEST(TargetList, Forms) {
  EXPECT_EQ(cli::parse_target_list("5"), std::vector<int>{5});
  EXPECT_EQ(cli::parse_target_list("-2..1"), (std::vector<int>{-2, -1, 0, 1}));
  EXPECT_EQ(cli::parse_target_list("3,-4"), (std::vector<int>{3, -4}));
  EXPECT_TRUE(cli::parse_target_list("").empty());
  EXPECT_THROW(cli::parse_target_list("4..1"), cli::config_error);
}
