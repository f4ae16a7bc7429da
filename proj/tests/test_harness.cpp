#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <json.hpp>

#include "iep/errors.hpp"
#include "iep/harness.hpp"
#include "iep/model.hpp"

namespace {

using iep::Command;
using iep::ExperimentConfig;

class Harness : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = std::filesystem::temp_directory_path() / "iep_harness_test";
    std::filesystem::create_directories(dir_);
    write_sample("u.csv", iep::DistributionModel::uniform().sample(120, 1));
    write_sample("e.csv", iep::DistributionModel::exponential(2.0).sample(120, 2));
    std::ofstream long_file(dir_ / "long.csv");
    long_file << "value,group\n";
    const auto s = iep::DistributionModel::uniform().sample(90, 3);
    for (std::size_t i = 0; i < s.size(); ++i) long_file << s.observations()[i] << ",g" << i % 3 << "\n";
  }
  void TearDown() override { std::filesystem::remove_all(dir_); }

  void write_sample(const std::string& name, const iep::Sample& s) {
    std::ofstream out(dir_ / name);
    out.precision(17);
    for (double x : s.observations()) out << x << "\n";
  }

  ExperimentConfig config(Command command) const {
    ExperimentConfig c;
    c.command = command;
    c.reps = 300;
    c.seed = 7;
    c.grid_depth = 6;
    return c;
  }

  std::filesystem::path dir_;
};

TEST(Commands, NamesRoundTrip) {
  for (auto c : {Command::gof, Command::twosample, Command::ksample, Command::changepoint,
                 Command::estimated, Command::localtime, Command::simulate_null,
                 Command::rate_experiment}) {
    EXPECT_EQ(iep::parse_command(iep::to_string(c)), c);
  }
  EXPECT_EQ(iep::to_string(Command::simulate_null), "simulate-null");
  EXPECT_THROW(iep::parse_command("fit"), iep::UsageError);
  EXPECT_EQ(iep::default_reps(Command::gof), 10000u);
  EXPECT_EQ(iep::default_reps(Command::estimated), 5000u);
}

TEST_F(Harness, EveryCommandIsReproducibleAcrossThreads) {
  std::vector<ExperimentConfig> configs;
  auto gof = config(Command::gof);
  gof.inputs = {dir_ / "u.csv"};
  configs.push_back(gof);
  auto two = config(Command::twosample);
  two.inputs = {dir_ / "u.csv", dir_ / "e.csv"};
  two.q = 2;
  configs.push_back(two);
  auto ks = config(Command::ksample);
  ks.inputs = {dir_ / "long.csv"};
  ks.group_column = "group";
  ks.statistic = "cvm";
  configs.push_back(ks);
  auto cp = config(Command::changepoint);
  cp.inputs = {dir_ / "u.csv"};
  cp.weighted = true;
  configs.push_back(cp);
  auto est = config(Command::estimated);
  est.inputs = {dir_ / "e.csv"};
  configs.push_back(est);
  auto lt = config(Command::localtime);
  lt.grid_depth.reset();
  lt.reps = 50;
  lt.n_list = {256};
  configs.push_back(lt);
  for (const char* statistic : {"ks", "cvm", "cp", "cp-weighted", "estimated"}) {
    auto sim = config(Command::simulate_null);
    sim.statistic = statistic;
    configs.push_back(sim);
  }
  for (const char* statistic : {"integrated", "plain", "estimated"}) {
    auto rate = config(Command::rate_experiment);
    rate.grid_depth.reset();
    rate.reps = 50;
    rate.statistic = statistic;
    rate.n_list = {64, 128};
    configs.push_back(rate);
  }
  for (auto c : configs) {
    c.threads = 1;
    const std::string first = iep::render(c);
    EXPECT_EQ(iep::render(c), first) << iep::to_string(c.command);
    c.threads = 8;
    EXPECT_EQ(iep::render(c), first) << iep::to_string(c.command);
    EXPECT_FALSE(first.empty());
  }
}

TEST_F(Harness, JsonReportCarriesConfig) {
  auto c = config(Command::gof);
  c.inputs = {dir_ / "e.csv"};
  c.model = "exp:2";
  const auto json = nlohmann::json::parse(iep::render(c));
  EXPECT_EQ(json["schema_version"], iep::kSchemaVersion);
  EXPECT_EQ(json["config"]["command"], "gof");
  EXPECT_EQ(json["config"]["reps"], 300);
  EXPECT_EQ(json["config"]["seed"], 7);
  EXPECT_EQ(json["config"]["model"], "exp:2");
  EXPECT_EQ(json["result"]["n"], 120);
  EXPECT_TRUE(json["result"]["critical_values"].contains("0.95"));
  EXPECT_EQ(json["result"]["warnings"].size(), 1u);
}

TEST_F(Harness, ChangepointReportHasArgmax) {
  auto c = config(Command::changepoint);
  c.inputs = {dir_ / "u.csv"};
  const auto json = nlohmann::json::parse(iep::render(c));
  EXPECT_TRUE(json["result"].contains("s_hat"));
  EXPECT_TRUE(json["result"].contains("t_hat"));
}

TEST_F(Harness, ChangepointDepthFollowsSampleSize) {
  auto c = config(Command::changepoint);
  c.inputs = {dir_ / "u.csv"};
  c.grid_depth.reset();
  const auto json = nlohmann::json::parse(iep::render(c));
  EXPECT_EQ(json["config"]["grid_depth"], 7);
  EXPECT_EQ(json["result"]["grid_intervals"], 128);
}

TEST_F(Harness, SimulateNullCsv) {
  auto c = config(Command::simulate_null);
  c.statistic = "cvm";
  const std::string csv = iep::render(c);
  EXPECT_NE(csv.find("\nlevel,critical_value\n0.50,"), std::string::npos);
  EXPECT_NE(csv.find("\n0.975,"), std::string::npos);
}

TEST_F(Harness, ValidationListsEveryProblem) {
  auto c = config(Command::gof);
  c.reps = 0;
  c.statistic = "median";
  try {
    iep::validate(c);
    FAIL();
  } catch (const iep::UsageError& e) {
    const std::string what = e.what();
    EXPECT_NE(what.find("--reps"), std::string::npos);
    EXPECT_NE(what.find("--statistic"), std::string::npos);
    EXPECT_NE(what.find("--data"), std::string::npos);
  }
  auto lt = config(Command::localtime);
  lt.grid_depth.reset();
  lt.n_list = {512, 256};
  EXPECT_THROW(iep::validate(lt), iep::UsageError);
  auto cp = config(Command::gof);
  cp.inputs = {dir_ / "u.csv"};
  cp.weighted = true;
  EXPECT_THROW(iep::validate(cp), iep::UsageError);
}

TEST_F(Harness, ExitCodes) {
  std::ostringstream out, err;
  auto c = config(Command::gof);
  c.inputs = {dir_ / "missing.csv"};
  EXPECT_EQ(iep::run(c, out, err), iep::kExitData);
  EXPECT_NE(err.str().find("missing.csv"), std::string::npos);

  c.inputs = {dir_ / "u.csv"};
  c.reps = 0;
  EXPECT_EQ(iep::run(c, out, err), iep::kExitUsage);

  c.reps = 100;
  c.model = "exp:-3";
  EXPECT_EQ(iep::run(c, out, err), iep::kExitUsage);

  c.model = "uniform";
  c.output = dir_ / "report.json";
  EXPECT_EQ(iep::run(c, out, err), iep::kExitOk);
  EXPECT_TRUE(std::filesystem::exists(dir_ / "report.json"));

  auto two = config(Command::twosample);
  two.inputs = {dir_ / "long.csv"};
  two.group_column = "group";
  EXPECT_EQ(iep::run(two, out, err), iep::kExitUsage);  // three groups
}

TEST_F(Harness, NullCacheFile) {
  auto c = config(Command::simulate_null);
  c.statistic = "ks";
  c.cache_dir = dir_ / "cache";
  const std::string first = iep::render(c);
  ASSERT_TRUE(std::filesystem::exists(dir_ / "cache"));
  std::size_t files = 0;
  for (const auto& entry : std::filesystem::directory_iterator(dir_ / "cache")) {
    EXPECT_EQ(entry.path().filename().string().rfind("null_", 0), 0u);
    ++files;
  }
  EXPECT_EQ(files, 1u);
  EXPECT_EQ(iep::render(c), first);
}

}  // namespace
