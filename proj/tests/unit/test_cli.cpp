#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "qbat/cli.hpp"

namespace qbat::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    root_ = fs::temp_directory_path() /
            ("qbat_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(root_);
    fs::create_directories(root_);
  }
  void TearDown() override { fs::remove_all(root_); }

  int run_json(json config, const std::string& sub = "out") {
    config["output_dir"] = (root_ / sub).string();
    out_.str("");
    err_.str("");
    return run_config(config, {}, out_, err_);
  }

  json read_json(const std::string& rel) const {
    std::ifstream in(root_ / rel);
    return json::parse(in);
  }

  std::string read_text(const fs::path& p) const {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  fs::path root_;
  std::ostringstream out_;
  std::ostringstream err_;
};

TEST_F(CliTest, AnalyzeTfim) {
  const auto config = json::parse(R"({"command":"analyze",
    "model":{"family":"tfim","n_peripheral":4,"parameters":{"J":1,"alpha":0.5}}})");
  ASSERT_EQ(run_json(config), kSuccess) << err_.str();
  const auto a = read_json("out/analysis.json");
  EXPECT_DOUBLE_EQ(a["g"].get<double>(), 2.5);
  EXPECT_EQ(a["locality"], 2);
  EXPECT_EQ(a["hermitian"], true);
  const auto m = read_json("out/manifest.json");
  EXPECT_EQ(m["tool"], "qbat");
  EXPECT_EQ(m["command"], "analyze");
  EXPECT_EQ(m["outputs"], json::array({"analysis.json"}));
  EXPECT_EQ(m["config"]["model"]["parameters"]["alpha"], 0.5);
  EXPECT_FALSE(m.contains("timestamp"));
}

TEST_F(CliTest, AnalyzeMcsAndEmpty) {
  ASSERT_EQ(run_json(json::parse(R"({"command":"analyze","model":{"family":"mcs_battery","n_peripheral":6}})")),
            kSuccess);
  auto a = read_json("out/analysis.json");
  EXPECT_DOUBLE_EQ(a["g"].get<double>(), 6.0);
  EXPECT_EQ(a["argmax_site"], 0);
  EXPECT_EQ(a["locality"], 2);
  ASSERT_EQ(run_json(json::parse(R"({"command":"analyze",
    "model":{"family":"custom","hamiltonian":{"n_sites":2,"terms":[]}}})")),
            kSuccess);
  a = read_json("out/analysis.json");
  EXPECT_EQ(a["g"], 0.0);
  EXPECT_EQ(a["locality"], 0);
}

TEST_F(CliTest, ConfigErrorsExitTwo) {
  EXPECT_EQ(run_json(json::parse(R"({"command":"analyze","model":{"family":"tfim","n_peripheral":4},"x":1})")),
            kConfigError);
  EXPECT_NE(err_.str().find("unknown key 'x'"), std::string::npos);
  EXPECT_EQ(run_json(json::parse(R"({"command":"analyze","model":{"family":"nope","n_peripheral":4}})")),
            kConfigError);
  EXPECT_EQ(run_json(json::parse(R"({"command":"analyze","model":{"family":"tfim","n_peripheral":2}})")),
            kConfigError);
  EXPECT_EQ(run_json(json::parse(R"({"command":"transmogrify"})")), kConfigError);
  EXPECT_EQ(run_json(json::parse(R"({"command":"evolve","battery":{"family":"tfim","n_peripheral":4},
    "charger":{"family":"tfim","n_peripheral":4},"initial":{"kind":"central_product"}})")),
            kConfigError);
}

TEST_F(CliTest, ResourceCapExitsThree) {
  const auto config = json::parse(R"({"command":"evolve","dense_cap":4,
    "battery":{"family":"mcs_battery","n_peripheral":4},"charger":{"family":"mcs_charger","n_peripheral":4}})");
  EXPECT_EQ(run_json(config), kResourceError);
  EXPECT_NE(err_.str().find("capped"), std::string::npos);
}

TEST_F(CliTest, EnvironmentCapOverridesConfig) {
  setenv("QB_DENSE_CAP", "3", 1);
  const auto config = json::parse(R"({"command":"bounds",
    "battery":{"family":"mcs_battery","n_peripheral":3},"charger":{"family":"mcs_charger","n_peripheral":3}})");
  const int code = run_json(config);
  unsetenv("QB_DENSE_CAP");
  EXPECT_EQ(code, kResourceError);
}

TEST_F(CliTest, SweepPartialResultsLabeled) {
  const auto config = json::parse(R"({"command":"sweep","dense_cap":6,"observable":"commutator_norm",
    "sizes":[4,5,6,7],
    "battery":{"family":"mcs_battery","n_peripheral":3},"charger":{"family":"mcs_charger","n_peripheral":3}})");
  EXPECT_EQ(run_json(config), kResourceError);
  const auto m = read_json("out/manifest.json");
  EXPECT_EQ(m["status"], "partial");
  const auto fit = read_json("out/fit.json");
  EXPECT_EQ(fit["complete"], false);
  EXPECT_EQ(fit["failed_size"], 7);
}

TEST_F(CliTest, BoundsWitnessAndHeader) {
  const auto config = json::parse(R"({"command":"bounds","sizes":[4,6],"normalize":false,
    "battery":{"family":"mcs_battery","n_peripheral":3},"charger":{"family":"mcs_charger","n_peripheral":3}})");
  EXPECT_EQ(run_json(config), kConfigError);
  auto fixed = config;
  fixed.erase("normalize");
  ASSERT_EQ(run_json(fixed), kSuccess) << err_.str();
  const auto csv = read_text(root_ / "out/bounds.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "n_total,exact,b6_BC,b6_CB,b2NgBgC,b2HBHC,witness,hyp_BC,hyp_CB");
  std::istringstream rows(csv);
  std::string line;
  std::getline(rows, line);
  std::vector<double> witness;
  while (std::getline(rows, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
    ASSERT_EQ(cells.size(), 9u);
    EXPECT_EQ(cells[7], "no");
    witness.push_back(std::stod(cells[6]));
  }
  ASSERT_EQ(witness.size(), 2u);
  EXPECT_NEAR(witness[0], 18.0, 1e-9);
  EXPECT_NEAR(witness[1], 50.0, 1e-9);
}

TEST_F(CliTest, HeatmapSidecar) {
  const auto config = json::parse(R"({"command":"heatmap",
    "reference":{"family":"ising_ring_z","n_peripheral":3},
    "probe":{"family":"custom","hamiltonian":{"n_sites":4,"terms":[{"coeff":1,"ops":"XXII"}]}}})");
  ASSERT_EQ(run_json(config), kSuccess) << err_.str();
  const auto side = read_json("out/transition_map.json");
  EXPECT_EQ(side["reference_commuting"], true);
  EXPECT_DOUBLE_EQ(side["commuting_window"].get<double>(), 8.0);
  const auto csv = read_text(root_ / "out/transition_map.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "Ea,Eb,value");
  const std::size_t g = side["group_energies"].size();
  EXPECT_EQ(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')), 1 + g * g);
}

TEST_F(CliTest, EvolveOutputsAreDeterministic) {
  const auto config = json::parse(R"({"command":"evolve","t_max":2,"n_steps":200,
    "battery":{"family":"mcs_battery","n_peripheral":4},"charger":{"family":"mcs_charger","n_peripheral":4}})");
  ASSERT_EQ(run_json(config, "a"), kSuccess) << err_.str();
  ASSERT_EQ(run_json(config, "b"), kSuccess) << err_.str();
  for (const char* f : {"dynamics.csv", "spectral_weights.csv", "summary.json"}) {
    EXPECT_EQ(read_text(root_ / "a" / f), read_text(root_ / "b" / f)) << f;
  }
  const auto s = read_json("a/summary.json");
  EXPECT_LE(s["max_abs_power"].get<double>(), s["power_bound"].get<double>() + 1e-8);
  EXPECT_LT(s["entropy"]["initial"].get<double>(), 1e-10);
  EXPECT_EQ(s["entropy"]["bipartition"], json::array({0, 1, 3}));
  const auto m = read_json("a/manifest.json");
  EXPECT_EQ(m["config"]["battery"]["normalize_extensive"], true);
  EXPECT_EQ(m["config"]["initial"]["kind"], "central_product");
  EXPECT_EQ(m["config"]["n_steps"], 200);
}

TEST_F(CliTest, CommandLineEntryPoint) {
  const fs::path cfg = root_ / "c.json";
  std::ofstream(cfg) << R"({"command":"analyze","model":{"family":"tfim","n_peripheral":3}})";
  const std::string out_dir = (root_ / "cli_out").string();
  {
    const char* argv[] = {"qbat", "analyze", "--config", cfg.c_str(), "--output-dir", out_dir.c_str()};
    EXPECT_EQ(run(6, argv, out_, err_), kSuccess) << err_.str();
    EXPECT_TRUE(fs::exists(root_ / "cli_out" / "analysis.json"));
  }
  {
    const char* argv[] = {"qbat", "evolve", "--config", cfg.c_str()};
    EXPECT_EQ(run(4, argv, out_, err_), kConfigError);
  }
  {
    const char* argv[] = {"qbat", "analyze"};
    EXPECT_EQ(run(2, argv, out_, err_), kConfigError);
  }
  {
    const char* argv[] = {"qbat", "--version"};
    out_.str("");
    EXPECT_EQ(run(2, argv, out_, err_), kSuccess);
    EXPECT_NE(out_.str().find(kToolVersion), std::string::npos);
  }
  {
    const fs::path bad = root_ / "bad.json";
    std::ofstream(bad) << "{not json";
    const char* argv[] = {"qbat", "--config", bad.c_str()};
    EXPECT_EQ(run(3, argv, out_, err_), kConfigError);
  }
}

}  // namespace
}  // namespace qbat::cli
