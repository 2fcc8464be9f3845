#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "chainfair/csv.hpp"
#include "chainfair/datafit.hpp"
#include "chainfair/solver.hpp"
#include "cli.hpp"

using namespace chainfair;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome call(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

CsvTable table(const std::string& text) {
  std::istringstream in(text);
  return read_csv(in);
}

std::map<std::string, std::string> key_values(const std::string& text) {
  std::map<std::string, std::string> kv;
  const CsvTable t = table(text);
  for (const auto& row : t.rows) kv[row[0]] = row[1];
  return kv;
}

const std::string kThreePairs = std::string(CHAINFAIR_TEST_DATA) + "/three_pairs.csv";

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("chainfair_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

// -----------------------------------------------------------------------------
// Usage

TEST(Cli, HelpListsColumns) {
  const Outcome r = call({"--help"});
  EXPECT_EQ(r.code, cli::kExitOk);
  EXPECT_NE(r.out.find("pair_index,x_hat,stderr"), std::string::npos);
  EXPECT_NE(r.out.find("CHAINFAIR_OUTPUT_DIR"), std::string::npos);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(call({}).code, cli::kExitUsage);
  EXPECT_EQ(call({"bogus"}).code, cli::kExitUsage);
  EXPECT_EQ(call({"solve", "--n", "3"}).code, cli::kExitUsage);
  EXPECT_EQ(call({"solve", "--n", "3", "--alpha", "1.5"}).code, cli::kExitUsage);
  EXPECT_EQ(call({"solve", "--n", "3", "--alpha", "0.5", "--method", "magic"}).code,
            cli::kExitUsage);
  EXPECT_EQ(call({"solve", "--n", "3", "--alpha", "0.5", "--frobnicate"}).code,
            cli::kExitUsage);
  EXPECT_EQ(call({"fit", "--input", "/nonexistent/trace.csv"}).code, cli::kExitUsage);
  EXPECT_EQ(call({"packet", "--alpha", "0.99"}).code, cli::kExitUsage);
  EXPECT_EQ(call({"packet", "--alpha", "0.6", "--rate", "3"}).code, cli::kExitUsage);
  EXPECT_EQ(call({"exact", "--n", "13", "--alpha", "0.5"}).code, cli::kExitUsage);
  EXPECT_EQ(call({"ring"}).code, cli::kExitUsage);
  EXPECT_EQ(call({"optimize", "--n", "5", "--format", "svg"}).code, cli::kExitUsage);
}

TEST(Cli, UsageErrorPrintsHelp) {
  const Outcome r = call({"solve", "--n", "3"});
  EXPECT_NE(r.err.find("--alpha"), std::string::npos);
  EXPECT_NE(r.err.find("Usage"), std::string::npos);
}

TEST(Cli, NumericalFailure) {
  const Outcome r = call({"solve", "--n", "3", "--alpha", "0.5", "--method", "fixed-point",
                          "--tol", "1e-300"});
  EXPECT_EQ(r.code, cli::kExitNumerical);
  EXPECT_NE(r.err.find("residual"), std::string::npos);
}

// -----------------------------------------------------------------------------
// Subcommands

TEST(Cli, SolveThreePairs) {
  const Outcome r = call({"solve", "--n", "3", "--alpha", "0.862"});
  ASSERT_EQ(r.code, 0) << r.err;
  const CsvTable t = table(r.out);
  EXPECT_EQ(t.header, (std::vector<std::string>{"pair", "x"}));
  ASSERT_EQ(t.rows.size(), 3u);
  EXPECT_NEAR(t.number(1, 1) / t.number(0, 1), 0.025, 0.002);
}

TEST(Cli, SolveSinglePair) {
  const Outcome r = call({"solve", "--n", "1", "--alpha", "0.4"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "pair,x\n1,0.4\n");
}

TEST(Cli, SolveHundredPairs) {
  const Outcome r = call({"solve", "--n", "100", "--alpha", "0.6826"});
  ASSERT_EQ(r.code, 0);
  const CsvTable t = table(r.out);
  ASSERT_EQ(t.rows.size(), 100u);
  EXPECT_NEAR(t.number(49, 1), 0.3177, 0.001);
}

TEST(Cli, Optimize) {
  const Outcome r = call({"optimize", "--n", "500"});
  ASSERT_EQ(r.code, 0);
  EXPECT_NEAR(std::stod(key_values(r.out).at("alpha_hat")), 0.7309, 0.002);
}

TEST(Cli, Packet) {
  const Outcome r = call({"packet", "--alpha", "0.6", "--rate", "2"});
  ASSERT_EQ(r.code, 0);
  EXPECT_NEAR(std::stol(key_values(r.out).at("bytes")), 250, 1);
}

TEST(Cli, PacketTimingOverride) {
  const auto base = key_values(call({"packet", "--alpha", "0.6"}).out);
  const auto with_difs =
      key_values(call({"packet", "--alpha", "0.6", "--wait-accounting", "difs"}).out);
  EXPECT_EQ(with_difs.at("t_wait_us"), "1046");
  EXPECT_GT(std::stol(with_difs.at("bytes")), std::stol(base.at("bytes")));
}

TEST(Cli, Frame) {
  const auto kv = key_values(call({"frame", "--bytes", "1500", "--rate", "2"}).out);
  EXPECT_EQ(kv.at("t_send_us"), "6496");
  EXPECT_EQ(kv.at("t_wait_us"), "996");
  EXPECT_NEAR(std::stod(kv.at("alpha")), 0.867, 0.001);
}

TEST(Cli, Fit) {
  const Outcome r = call({"fit", "--input", kThreePairs});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(std::stod(key_values(r.out).at("alpha_fit")), 0.862, 0.02);
}

TEST(Cli, Compare) {
  const Outcome r = call({"compare", "--input", kThreePairs, "--alpha", "0.862"});
  ASSERT_EQ(r.code, 0);
  const CsvTable t = table(r.out);
  EXPECT_EQ(t.header,
            (std::vector<std::string>{"pair", "observed_rho", "model_rho", "residual"}));
  EXPECT_DOUBLE_EQ(t.number(0, 1), 1.0);
  EXPECT_NEAR(t.number(1, 3), t.number(1, 2) - t.number(1, 1), 1e-15);
}

TEST(Cli, Ring) {
  EXPECT_EQ(key_values(call({"ring", "--alpha", "0.75"}).out).at("x"),
            format_double(1.0 / 3.0));
  EXPECT_NEAR(std::stod(key_values(call({"ring", "--x", "0.3333333333333333"}).out).at("alpha")),
              0.75, 1e-12);
}

TEST(Cli, SweepRows) {
  const Outcome r = call({"sweep", "--n", "10", "20", "--points", "9"});
  ASSERT_EQ(r.code, 0);
  const CsvTable t = table(r.out);
  EXPECT_EQ(t.rows.size(), 18u);
  EXPECT_EQ(t.rows[9][0], "20");
  EXPECT_EQ(t.rows[9][1], "0.1");
}

TEST(Cli, SimulateAndExact) {
  const Outcome s = call({"simulate", "--n", "4", "--alpha", "0.6", "--steps", "200000"});
  ASSERT_EQ(s.code, 0);
  const CsvTable st = table(s.out);
  EXPECT_EQ(st.header, (std::vector<std::string>{"pair_index", "x_hat", "stderr"}));
  const CsvTable et = table(call({"exact", "--n", "4", "--alpha", "0.6"}).out);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_LE(std::abs(st.number(i, 1) - et.number(i, 1)), 4 * st.number(i, 2));
  }
}

TEST(Cli, GapGrid) {
  const CsvTable t = table(call({"gap"}).out);
  EXPECT_EQ(t.rows.size(), 7u * 4u);
}

TEST(Cli, CircleSmall) {
  const CsvTable t = table(call({"circle", "--pairs", "5", "--trials", "3000"}).out);
  EXPECT_EQ(t.rows.size(), 5u);
}

TEST(Cli, FlatAndCurve) {
  const CsvTable f = table(call({"flat", "--ns", "100"}).out);
  EXPECT_NEAR(f.number(0, 2), 0.3177, 0.001);
  const CsvTable c = table(call({"curve", "--ns", "10", "20"}).out);
  EXPECT_NEAR(c.number(0, 1), 0.5536, 0.002);
  EXPECT_NEAR(c.number(1, 1), 0.5977, 0.002);
}

// -----------------------------------------------------------------------------
// Output properties

TEST(Cli, DeterministicOutput) {
  const std::vector<std::vector<std::string>> commands{
      {"solve", "--n", "12", "--alpha", "0.7"},
      {"optimize", "--n", "8"},
      {"sweep", "--n", "5", "--points", "7"},
      {"ring", "--alpha", "0.5"},
      {"flat", "--ns", "100"},
      {"curve", "--ns", "5", "10"},
      {"circle", "--pairs", "7", "--trials", "2000", "--seed", "4"},
      {"simulate", "--n", "3", "--alpha", "0.5", "--steps", "10000", "--seed", "8"},
      {"simulate", "--n", "3", "--alpha", "0.5", "--steps", "10000", "--policy",
       "random-order"},
      {"exact", "--n", "3", "--alpha", "0.5"},
      {"gap", "--ns", "2", "3"},
      {"fit", "--input", kThreePairs},
      {"compare", "--input", kThreePairs},
      {"packet", "--alpha", "0.7"},
      {"frame", "--bytes", "512"},
      {"solve", "--n", "6", "--alpha", "0.7", "--format", "svg"},
  };
  for (const auto& args : commands) {
    const Outcome a = call(args), b = call(args);
    EXPECT_EQ(a.code, 0) << args[0] << ": " << a.err;
    EXPECT_EQ(a.out, b.out) << args[0];
    EXPECT_FALSE(a.out.empty()) << args[0];
  }
}

TEST(Cli, CsvRoundTripIsLossless) {
  const CsvTable t = table(call({"solve", "--n", "25", "--alpha", "0.81"}).out);
  const auto x = newton_solve({25, 0.81});
  for (std::size_t i = 0; i < x.size(); ++i) EXPECT_EQ(t.number(i, 1), x[i]);
}

TEST(Cli, SolveOutputFeedsTraceReader) {
  // A model profile written by `solve` is a valid trace once the header is renamed.
  std::string csv = call({"solve", "--n", "9", "--alpha", "0.55"}).out;
  csv.replace(0, csv.find('\n'), "pair,rate");
  std::istringstream in(csv);
  const ThroughputTrace trace = read_trace_csv(in);
  EXPECT_NEAR(fit_alpha(trace).alpha_fit, 0.55, 1e-3);
}

TEST(Cli, SvgFormat) {
  const Outcome r = call({"sweep", "--n", "10", "--points", "5", "--format", "svg"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("<svg", 0), 0u);
  EXPECT_NE(r.out.find("<polyline class=\"series\""), std::string::npos);
  const Outcome flat = call({"flat", "--ns", "100", "--format", "svg"});
  EXPECT_NE(flat.out.find("class=\"reference\""), std::string::npos);
}

// -----------------------------------------------------------------------------
// Files and config

TEST(Cli, OutputDirectoryFromEnvironment) {
  const fs::path dir = scratch_dir("env");
  ::setenv(cli::kOutputDirEnv, dir.c_str(), 1);
  const Outcome r = call({"solve", "--n", "2", "--alpha", "0.5", "--output", "x.csv"});
  ::unsetenv(cli::kOutputDirEnv);
  ASSERT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(dir / "x.csv");
  std::stringstream body;
  body << in.rdbuf();
  EXPECT_EQ(body.str().rfind("pair,x\n", 0), 0u);
}

TEST(Cli, AbsoluteOutputIgnoresEnvironment) {
  const fs::path dir = scratch_dir("abs");
  ::setenv(cli::kOutputDirEnv, "/nonexistent", 1);
  const Outcome r = call({"ring", "--alpha", "0.75", "-o", (dir / "r.csv").string()});
  ::unsetenv(cli::kOutputDirEnv);
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(fs::exists(dir / "r.csv"));
}

TEST(Cli, ConfigFileAndOverride) {
  const fs::path dir = scratch_dir("config");
  const fs::path cfg = dir / "run.json";
  std::ofstream(cfg) << R"({"solve": {"n": 5, "alpha": 0.5, "method": "fixed-point"}})";
  const Outcome from_file = call({"--config", cfg.string(), "solve"});
  ASSERT_EQ(from_file.code, 0) << from_file.err;
  EXPECT_EQ(table(from_file.out).rows.size(), 5u);

  const Outcome overridden = call({"--config", cfg.string(), "solve", "--alpha", "0.7"});
  const Outcome direct =
      call({"solve", "--n", "5", "--alpha", "0.7", "--method", "fixed-point"});
  EXPECT_EQ(overridden.out, direct.out);
}

TEST(Cli, ConfigTopLevelKeysAndLists) {
  const fs::path dir = scratch_dir("config_top");
  const fs::path cfg = dir / "run.json";
  std::ofstream(cfg) << R"({"ns": [2, 3], "alphas": [0.5], "difs": 60})";
  const Outcome r = call({"gap", "--config", cfg.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(table(r.out).rows.size(), 2u);
}

TEST(Cli, ConfigTimingConstants) {
  const fs::path dir = scratch_dir("config_timing");
  const fs::path cfg = dir / "t.json";
  std::ofstream(cfg) << R"({"frame": {"cw-min": 0}})";
  const auto kv = key_values(call({"--config", cfg.string(), "frame"}).out);
  EXPECT_EQ(kv.at("t_wait_us"), "686");
}

TEST(Cli, ConfigErrors) {
  const fs::path dir = scratch_dir("config_bad");
  std::ofstream(dir / "bad.json") << "{not json";
  EXPECT_EQ(call({"--config", (dir / "bad.json").string(), "ring", "--alpha", "0.5"}).code,
            cli::kExitUsage);
  std::ofstream(dir / "unknown.json") << R"({"ring": {"nope": 1}})";
  EXPECT_EQ(call({"--config", (dir / "unknown.json").string(), "ring", "--alpha", "0.5"}).code,
            cli::kExitUsage);
  EXPECT_EQ(call({"--config", (dir / "missing.json").string(), "ring"}).code, cli::kExitUsage);
}
