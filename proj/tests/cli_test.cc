#include "cli.h"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "gtest/gtest.h"
#include "json.hpp"

using namespace optele::cli;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "optele");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = run(int(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string temp_path(const std::string& name) { return ::testing::TempDir() + "optele_cli_" + name; }

void write_file(const std::string& path, const std::string& text) { std::ofstream(path) << text; }

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream ss(text);
  for (std::string line; std::getline(ss, line);) out.push_back(line);
  return out;
}

}  // namespace

TEST(Format, twelve_significant_digits) {
  EXPECT_EQ(format_number(0.99007945262781486), "0.990079452628");
  EXPECT_EQ(format_number(-0.0), "0");
  EXPECT_EQ(format_number(1e-15), "1e-15");
}

TEST(Format, csv_quoting_and_missing_cells) {
  Table t{{"x", "s", "m"}, {{1.5, std::string("a,b"), std::monostate{}}, {int64_t(3), std::string("q\""), 0.25}}};
  std::ostringstream os;
  write_csv(os, t);
  EXPECT_EQ(os.str(), "x,s,m\n1.5,\"a,b\",\n3,\"q\"\"\",0.25\n");
}

TEST(Cli, teleport_hybrid_example) {
  Outcome r = invoke({"teleport", "--encoding", "hybrid", "--alpha", "1.4", "--a", "0.6", "--b", "0.8", "--format", "json"});
  ASSERT_EQ(r.code, kOk) << r.err;
  auto doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc["schema"], 1);
  EXPECT_NEAR(doc["summary"]["p_success_sim"].get<double>(), 0.990080, 1e-6);
  EXPECT_NEAR(doc["summary"]["p_success_analytic"].get<double>(), 1 - std::exp(-3.92) / 2, 1e-11);
  EXPECT_LT(doc["summary"]["abs_dev"].get<double>(), 1e-6);
  EXPECT_NE(r.err.find("analytic"), std::string::npos);
}

TEST(Cli, bp_table_example) {
  Outcome r = invoke({"bp-table"});
  ASSERT_EQ(r.code, kOk) << r.err;
  std::vector<std::string> expected = {
      "input,outcome,classification,probability",
      "Phi+,bunched,fail,1",
      "Phi-,bunched,fail,1",
      "Psi+,\"(H,V)\",Psi+,0.5",
      "Psi+,\"(V,H)\",Psi+,0.5",
      "Psi-,\"(H,H)\",Psi-,0.5",
      "Psi-,\"(V,V)\",Psi-,0.5",
  };
  EXPECT_EQ(lines(r.out), expected);
}

TEST(Cli, polarization_sweep_is_flat) {
  Outcome r = invoke({"sweep", "--encoding", "polarization"});
  ASSERT_EQ(r.code, kOk) << r.err;
  auto rows = lines(r.out);
  ASSERT_EQ(rows.size(), 5u);
  EXPECT_EQ(rows[0], "alpha,p_success_sim,p_success_analytic,abs_dev,mean_fidelity_success,cutoff_used");
  for (size_t i = 1; i < rows.size(); ++i) EXPECT_EQ(rows[i].substr(rows[i].find(',')).substr(0, 9), ",0.5,0.5,");
}

TEST(Cli, every_scenario_runs_at_defaults) {
  for (const char* s : {"bp-table", "balpha-table", "teleport", "sweep", "gen-hybrid", "gen-ecs"}) {
    Outcome r = invoke({s});
    EXPECT_EQ(r.code, kOk) << s << ": " << r.err;
    EXPECT_FALSE(r.out.empty()) << s;
  }
}

TEST(Cli, sampled_runs_are_deterministic) {
  std::vector<std::string> args = {"sweep", "--trials", "2000", "--seed", "11", "--format", "json"};
  Outcome a = invoke(args), b = invoke(args);
  ASSERT_EQ(a.code, kOk) << a.err;
  EXPECT_EQ(a.out, b.out);
  args[4] = "12";
  EXPECT_NE(invoke(args).out, a.out);
}

TEST(Cli, exit_codes) {
  EXPECT_EQ(invoke({}).code, kConfigError);
  EXPECT_EQ(invoke({"teleport", "--encoding", "qutrit"}).code, kConfigError);
  EXPECT_EQ(invoke({"teleport", "--trials", "10", "--exact"}).code, kConfigError);
  EXPECT_EQ(invoke({"teleport", "--a", "0", "--b", "0"}).code, kConfigError);
  EXPECT_EQ(invoke({"sweep", "--alphas", "1,0.5"}).code, kConfigError);
  EXPECT_EQ(invoke({"teleport", "--out", "/nonexistent-dir/x.csv"}).code, kConfigError);
  EXPECT_EQ(invoke({"gen-hybrid", "--gamma", "40"}).code, kCutoffSaturation);
  EXPECT_EQ(invoke({"--help"}).code, kOk);
}

TEST(Cli, toml_config_with_flag_override) {
  const std::string path = temp_path("run.toml");
  write_file(path, "scenario = \"teleport\"\nalpha = 1.4\na = 0.6\nb = 0.8\n");
  Outcome r = invoke({"--config", path, "--alpha", "1.0", "--format", "json"});
  ASSERT_EQ(r.code, kOk) << r.err;
  auto doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc["config"]["alpha"].get<double>(), 1.0);
  EXPECT_EQ(doc["config"]["a"].get<double>(), 0.6);
  EXPECT_NEAR(doc["summary"]["p_success_sim"].get<double>(), 1 - std::exp(-2.0) / 2, 1e-10);

  // The subcommand wins over the config scenario.
  EXPECT_EQ(lines(invoke({"bp-table", "--config", path}).out).at(0), "input,outcome,classification,probability");
  std::remove(path.c_str());
}

TEST(Cli, unknown_config_key_rejected) {
  const std::string path = temp_path("bad.toml");
  write_file(path, "scenario = \"teleport\"\nbogus = 3\n");
  EXPECT_EQ(invoke({"--config", path}).code, kConfigError);
  write_file(path, "{\"scenario\": \"teleport\", \"bogus\": 3}");
  EXPECT_EQ(invoke({"--config", path}).code, kConfigError);
  write_file(path, "{\"scenario\": ");
  EXPECT_EQ(invoke({"--config", path}).code, kConfigError);
  std::remove(path.c_str());
}

TEST(Cli, json_result_reruns_identically) {
  const std::string path = temp_path("result.json");
  Outcome first = invoke({"teleport", "--encoding", "coherent", "--a", "0.6", "--b", "0.8", "--trials", "500",
                          "--seed", "3", "--format", "json", "--out", path});
  ASSERT_EQ(first.code, kOk) << first.err;
  std::ifstream in(path);
  std::string payload((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  Outcome again = invoke({"--config", path});
  ASSERT_EQ(again.code, kOk) << again.err;
  EXPECT_EQ(again.out, payload);
  std::remove(path.c_str());
}

TEST(Cli, json_numbers_round_trip_at_twelve_digits) {
  Outcome r = invoke({"balpha-table", "--alpha", "1.3", "--format", "json"});
  ASSERT_EQ(r.code, kOk) << r.err;
  auto doc = nlohmann::json::parse(r.out);
  Outcome csv = invoke({"balpha-table", "--alpha", "1.3"});
  auto rows = lines(csv.out);
  ASSERT_EQ(rows.size(), doc["rows"].size() + 1);
  for (size_t i = 0; i < doc["rows"].size(); ++i) {
    const std::string p = format_number(doc["rows"][i]["probability"].get<double>());
    EXPECT_EQ(rows[i + 1].substr(rows[i + 1].rfind(',') + 1), p);
  }
}
