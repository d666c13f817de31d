#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "cfii/models.hpp"
#include "cli/commands.hpp"

using namespace cfii::cli;

namespace {

struct Invocation {
  int code = -1;
  std::string out;
  std::string err;
};

Invocation invoke(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  Invocation r;
  r.code = run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

struct Csv {
  std::vector<std::string> meta;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t col(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return i;
    throw std::runtime_error("missing column " + name);
  }
  double num(std::size_t row, const std::string& name) const {
    return std::stod(rows.at(row).at(col(name)));
  }
};

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, sep)) out.push_back(field);
  return out;
}

Csv parse_csv(const std::string& text) {
  Csv csv;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    if (line.rfind("# ", 0) == 0) {
      csv.meta.push_back(line);
    } else if (csv.header.empty()) {
      csv.header = split(line, ',');
    } else {
      csv.rows.push_back(split(line, ','));
    }
  }
  return csv;
}

std::string without_wall_clock(const std::string& text) {
  std::stringstream ss(text);
  std::string line, out;
  while (std::getline(ss, line)) {
    if (line.rfind("# wall_clock_s:", 0) == 0) continue;
    out += line + "\n";
  }
  return out;
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("cfii_test_" + name);
}

Invocation ok(const std::vector<std::string>& args) {
  Invocation r = invoke(args);
  EXPECT_EQ(r.code, 0) << r.err;
  return r;
}

}  // namespace

TEST(ParseAngle, Expressions) {
  EXPECT_DOUBLE_EQ(parse_angle("1.25"), 1.25);
  EXPECT_DOUBLE_EQ(parse_angle("pi"), cfii::kPi);
  EXPECT_DOUBLE_EQ(parse_angle("-pi/2"), -cfii::kPi / 2);
  EXPECT_DOUBLE_EQ(parse_angle("2pi"), 2 * cfii::kPi);
  EXPECT_DOUBLE_EQ(parse_angle("0.7*pi"), 0.7 * cfii::kPi);
  EXPECT_DOUBLE_EQ(parse_angle(" 3 * pi / 8 "), 3 * cfii::kPi / 8);
  EXPECT_THROW(parse_angle("pie"), ConfigError);
  EXPECT_THROW(parse_angle("x"), ConfigError);
  EXPECT_THROW(parse_angle("pi/0"), ConfigError);
  EXPECT_THROW(parse_angle(""), ConfigError);
}

TEST(GridSpec, ParseAndPoints) {
  const GridSpec g = GridSpec::parse("0:pi:5");
  const auto p = g.points();
  ASSERT_EQ(p.size(), 5u);
  EXPECT_EQ(p.front(), 0.0);
  EXPECT_EQ(p.back(), cfii::kPi);
  EXPECT_DOUBLE_EQ(p[2], cfii::kPi / 2);
  EXPECT_EQ(GridSpec::parse(g.str()).points(), p);
  for (const char* bad : {"0:1:1", "0:1:0", "1:0:5", "0:1", "0:1:2.5", "a:b:c"}) {
    EXPECT_THROW(GridSpec::parse(bad), ConfigError) << bad;
  }
}

TEST(CmdFi, DeterministicCollapseIsConstant) {
  const Csv csv = parse_csv(ok({"fi", "--grid", "0:2pi:100"}).out);
  ASSERT_EQ(csv.rows.size(), 100u);
  for (std::size_t i = 0; i < csv.rows.size(); ++i) EXPECT_NEAR(csv.num(i, "fi"), 1.0, 1e-12);
}

TEST(CmdFi, NoisyGoldenValues) {
  const Csv csv = parse_csv(
      ok({"fi", "--model", "noisy", "--gamma", "0.25", "--eps-r", "0.02", "--grid", "pi/8:pi/2:2"})
          .out);
  ASSERT_EQ(csv.rows.size(), 2u);
  EXPECT_NEAR(csv.num(0, "fi"), 0.8065, 5e-4);
  EXPECT_NEAR(csv.num(1, "fi"), 0.4202, 5e-4);
}

TEST(CmdFi, DegenerateGridIsConfigError) {
  EXPECT_EQ(invoke({"fi", "--grid", "0:1:1"}).code, 2);
  EXPECT_EQ(invoke({"fi", "--grid", "0:1:0"}).code, 2);
}

TEST(CmdLandscape, SignAgreementOnGenericPreparation) {
  const Invocation r = ok({"landscape", "--vartheta", "0.7pi", "--varphi", "0.3pi", "--grid",
                           "0.05:pi:64"});
  const Csv csv = parse_csv(r.out);
  ASSERT_EQ(csv.rows.size(), 64u * 64u);
  int checked = 0;
  for (std::size_t i = 0; i < csv.rows.size(); ++i) {
    if (csv.rows[i][csv.col("degenerate")] == "true") continue;
    const double v = csv.num(i, "v"), g = csv.num(i, "g");
    EXPECT_EQ(v < 0.0, g < 0.0) << i;
    EXPECT_LE(std::abs(csv.num(i, "v_clipped")), 5.0);
    ++checked;
  }
  EXPECT_GT(checked, 4000);
  EXPECT_NE(r.out.find("# sign_agreement: true"), std::string::npos);
  EXPECT_NE(r.out.find("# clip_hi: 5.0"), std::string::npos);
}

TEST(CmdLandscape, DeterministicCollapseGivesConstantWitness) {
  const Csv csv = parse_csv(ok({"landscape", "--grid", "0.1:3:16"}).out);
  for (std::size_t i = 0; i < csv.rows.size(); ++i) EXPECT_NEAR(csv.num(i, "v"), -1.0, 1e-10);
  EXPECT_EQ(invoke({"landscape", "--grid", "0.1:3:1"}).code, 2);
}

TEST(CmdCertify, AnalyticSignificance) {
  const Csv csv = parse_csv(ok({"certify", "--seed", "1", "--gamma", "0.25", "--shots", "1000"}).out);
  ASSERT_EQ(csv.rows.size(), 1u);
  EXPECT_NEAR(csv.num(0, "se_expected"), 0.2121, 2e-3);
  EXPECT_NEAR(csv.num(0, "z_expected"), 12.17, 0.15);
  EXPECT_NEAR(csv.num(0, "se"), 0.2121, 2e-3);
  EXPECT_EQ(invoke({"certify", "--seed", "1", "--shots", "0"}).code, 2);
}

TEST(CmdCertify, SweepBoundaryNearCrossing) {
  const Csv csv = parse_csv(ok({"certify", "--seed", "2", "--gamma-grid", "0.30:0.50:21",
                                "--shots-list", "1000,1000000"})
                                .out);
  ASSERT_EQ(csv.rows.size(), 42u);
  double last_certified = -1.0;
  for (std::size_t i = 0; i < csv.rows.size(); ++i) {
    if (csv.rows[i][csv.col("shots")] != "1000000") continue;
    if (csv.rows[i][csv.col("z_expected_ge_5")] == "true") last_certified = csv.num(i, "gamma");
  }
  EXPECT_GE(last_certified, 0.42);
  EXPECT_LE(last_certified, 0.445);
}

TEST(CmdAdversary, FrontierAndSummaryConsistency) {
  const Invocation r = ok({"adversary", "--seed", "2024", "--l", "5", "--m", "5", "--restarts",
                           "36", "--format", "json"});
  const auto doc = nlohmann::json::parse(r.out);
  const auto& rows = doc["rows"];
  ASSERT_EQ(rows.size(), 36u);
  double sum = 0.0, lo = INFINITY, hi = -INFINITY;
  for (const auto& row : rows) {
    const double g = row[2].get<double>();
    sum += g;
    lo = std::min(lo, g);
    hi = std::max(hi, g);
  }
  EXPECT_EQ(doc["meta"]["gamma_max"].get<double>(), hi);
  EXPECT_EQ(doc["meta"]["gamma_min"].get<double>(), lo);
  EXPECT_EQ(doc["meta"]["gamma_mean"].get<double>(), sum / 36.0);
  EXPECT_LE(doc["meta"]["max_evaluated"].get<double>(), 1.0 + 1e-9);
  EXPECT_GE(hi, 0.99);
}

TEST(CmdAdversary, UntrainedSingleRestart) {
  const Csv csv = parse_csv(ok({"adversary", "--seed", "5", "--restarts", "1", "--steps", "0"}).out);
  ASSERT_EQ(csv.rows.size(), 1u);
  EXPECT_EQ(csv.rows[0][csv.col("initial_gamma")], csv.rows[0][csv.col("best_gamma")]);
}

TEST(CmdAdversary, SingleMediatorIsDegenerate) {
  EXPECT_EQ(invoke({"adversary", "--seed", "5", "--l", "1", "--steps", "0", "--restarts", "1"})
                .code,
            3);
}

TEST(CmdRmse, ReachesCramerRaoAndReportsBothBounds) {
  const Csv csv = parse_csv(ok({"rmse", "--seed", "7", "--n-list", "10000", "--reps", "1000"}).out);
  ASSERT_EQ(csv.rows.size(), 1u);
  EXPECT_NEAR(csv.num(0, "rmse"), 0.01, 0.05 * 0.01);
  EXPECT_NEAR(csv.num(0, "classical_bound") / csv.num(0, "crb"), std::sqrt(2.0), 1e-15);
  EXPECT_EQ(invoke({"rmse", "--seed", "7", "--reps", "0"}).code, 2);
}

TEST(CmdChain, IdealAndNoisy) {
  Csv csv = parse_csv(ok({"chain", "--gamma-grid", "0:0.25:2", "--eps-r", "0", "--k-list",
                          "2,3,4,8,16"})
                          .out);
  for (std::size_t i = 0; i < 5; ++i) {
    EXPECT_NEAR(csv.num(i, "gamma_k"), csv.num(i, "k"), 1e-12);
  }
  csv = parse_csv(ok({"chain", "--gamma-grid", "0.25:0.5:2", "--k-list", "4"}).out);
  EXPECT_NEAR(csv.num(0, "gamma_k"), 2.0841, 5e-4);
  EXPECT_NEAR(csv.num(0, "v_k"), -2.5799, 5e-4);
  EXPECT_NEAR(csv.num(0, "gamma_k_mid_fringe"), 4.0 * std::exp(-2.0 * 0.25 * cfii::kPi / 2 * 0.75),
              1e-12);
  EXPECT_EQ(invoke({"chain", "--k-list", "1"}).code, 2);
}

TEST(CmdCrossing, ReportedThreshold) {
  const Csv csv = parse_csv(ok({"crossing", "--k", "4"}).out);
  EXPECT_NEAR(csv.num(0, "gamma_star"), 0.444, 0.005);
}

TEST(CmdNsitDemo, Separation) {
  const Csv csv = parse_csv(ok({"nsit-demo"}).out);
  EXPECT_EQ(csv.rows[0][csv.col("nsit_holds")], "true");
  EXPECT_NEAR(csv.num(0, "v_path"), -1.0, 1e-12);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(invoke({}).code, 2);
  EXPECT_EQ(invoke({"bogus"}).code, 2);
  EXPECT_EQ(invoke({"fi", "--no-such-flag", "1"}).code, 2);
  EXPECT_EQ(invoke({"fi", "--format", "xml"}).code, 2);
  EXPECT_EQ(invoke({"fi", "--gamma", "oops"}).code, 2);
  EXPECT_EQ(invoke({"fi", "--config", "/nonexistent/cfg.json"}).code, 2);
  EXPECT_EQ(invoke({"adversary"}).code, 2);
  EXPECT_EQ(invoke({"fi", "--help"}).code, 0);
}

TEST(Cli, MetadataBlock) {
  const Csv csv = parse_csv(ok({"rmse", "--seed", "99", "--n-list", "10", "--reps", "10"}).out);
  bool has_seed = false, has_config = false, has_version = false, has_clock = false;
  for (const auto& line : csv.meta) {
    has_seed |= line == "# seed: 99";
    has_config |= line.rfind("# config: {", 0) == 0;
    has_version |= line.rfind("# tool_version: ", 0) == 0;
    has_clock |= line.rfind("# wall_clock_s: ", 0) == 0;
  }
  EXPECT_TRUE(has_seed && has_config && has_version && has_clock);
  EXPECT_EQ(csv.header.size(), csv.rows[0].size());
}

TEST(Cli, ReproducibleOutput) {
  const std::vector<std::vector<std::string>> commands = {
      {"certify", "--seed", "11", "--reps", "20"},
      {"adversary", "--seed", "11", "--restarts", "4", "--steps", "100"},
      {"rmse", "--seed", "11", "--reps", "200"},
  };
  for (const auto& args : commands) {
    setenv("CFII_THREADS", "1", 1);
    const std::string a = without_wall_clock(ok(args).out);
    setenv("CFII_THREADS", "4", 1);
    const std::string b = without_wall_clock(ok(args).out);
    unsetenv("CFII_THREADS");
    EXPECT_EQ(a, b) << args[0];
    auto other = args;
    other[2] = "12";
    EXPECT_NE(a, without_wall_clock(ok(other).out)) << args[0];
  }
}

TEST(Cli, JsonOutputRoundTripsAsConfig) {
  const auto first = temp_file("first.json");
  const auto second = temp_file("second.json");
  ok({"certify", "--seed", "3", "--gamma", "0.3", "--k", "3", "--reps", "5", "--format", "json",
      "--out", first.string()});
  ok({"certify", "--config", first.string(), "--out", second.string()});
  auto load = [](const std::filesystem::path& p) {
    std::ifstream in(p);
    auto doc = nlohmann::json::parse(in);
    doc["meta"].erase("wall_clock_s");
    doc["meta"]["config"].erase("out");
    return doc;
  };
  EXPECT_EQ(load(first), load(second));
  EXPECT_EQ(load(first)["meta"]["config"]["gamma"].get<double>(), 0.3);
  std::filesystem::remove(first);
  std::filesystem::remove(second);
}

TEST(Cli, ConfigPrecedence) {
  const auto path = temp_file("precedence.json");
  {
    std::ofstream f(path);
    f << R"({"gamma": 0.3, "eps_r": 0.01, "model": "noisy", "grid": "pi/8:pi/2:2"})";
  }
  auto config_of = [](const Invocation& r) {
    const Csv csv = parse_csv(r.out);
    for (const auto& line : csv.meta) {
      if (line.rfind("# config: ", 0) == 0) return nlohmann::json::parse(line.substr(10));
    }
    return nlohmann::json();
  };
  const auto from_file = config_of(ok({"fi", "--config", path.string()}));
  EXPECT_EQ(from_file["gamma"].get<double>(), 0.3);
  EXPECT_EQ(from_file["eps_r"].get<double>(), 0.01);
  const auto overridden = config_of(ok({"fi", "--config", path.string(), "--gamma", "0.25"}));
  EXPECT_EQ(overridden["gamma"].get<double>(), 0.25);
  EXPECT_EQ(overridden["eps_r"].get<double>(), 0.01);
  const auto defaults = config_of(ok({"fi"}));
  EXPECT_EQ(defaults["gamma"].get<double>(), 0.25);
  EXPECT_EQ(defaults["model"].get<std::string>(), "qubit");
  {
    std::ofstream f(path);
    f << R"({"gamma": 0.3, "typo_key": 1})";
  }
  EXPECT_EQ(invoke({"fi", "--config", path.string()}).code, 2);
  std::filesystem::remove(path);
}
