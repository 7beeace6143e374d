#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "support.hpp"

using namespace noncross;
using noncross::testing::fixture;

namespace {

struct Invocation {
  int code = 0;
  std::string out, err;
};

Invocation run(std::vector<std::string> args) {
  std::ostringstream out, err;
  Invocation r;
  r.code = cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string map_path(const std::string& name) { return fixture("maps/" + name + ".json"); }
std::string curve_path(const std::string& name) { return fixture("curves/" + name + ".json"); }

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("noncross_cli_" + name)).string();
}

std::size_t count(const std::string& hay, const std::string& needle) {
  std::size_t n = 0;
  for (auto p = hay.find(needle); p != std::string::npos; p = hay.find(needle, p + 1)) ++n;
  return n;
}

}  // namespace

TEST(CliExitCodes, Table) {
  EXPECT_EQ(cli::exit_code_for("schema-error"), 2);
  EXPECT_EQ(cli::exit_code_for("precondition"), 2);
  EXPECT_EQ(cli::exit_code_for("usage"), 2);
  EXPECT_EQ(cli::exit_code_for("io-error"), 2);
  EXPECT_EQ(cli::exit_code_for("bad-circle"), 2);
  EXPECT_EQ(cli::exit_code_for("degenerate-polyline"), 2);
  EXPECT_EQ(cli::exit_code_for("undefined-at-point"), 3);
  EXPECT_EQ(cli::exit_code_for("out-of-domain"), 3);
  EXPECT_EQ(cli::exit_code_for("jacobian-unreliable"), 3);
  EXPECT_EQ(cli::exit_code_for("nc-obstruction"), 1);
  EXPECT_EQ(cli::exit_code_for("distinct-image-violation"), 1);
  EXPECT_EQ(cli::exit_code_for("epsilon-too-small-for-resolution"), 1);
}

TEST(CliMapEval, CounterexampleOrigin) {
  const Invocation r = run({"map", "eval", "--map", map_path("counterexample"), "--point", "0,0"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json j = parse_json_text(r.out);
  EXPECT_EQ(j["image"], Json::array({1.0, 0.0}));
}

TEST(CliMapEval, IdentityWithJacobian) {
  const Invocation r = run({"map", "eval", "--map", map_path("identity"), "--point", "0.3,0.3", "--jacobian"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json j = parse_json_text(r.out);
  EXPECT_EQ(j["image"], Json::array({0.3, 0.3}));
  EXPECT_EQ(j["det"].get<double>(), 1.0);
}

TEST(CliMapEval, SeveralPoints) {
  const Invocation r = run({"map", "eval", "--map", map_path("identity"), "--point", "0.1,0.2", "--point", "0.3,0.4"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(parse_json_text(r.out)["results"].size(), 2u);
}

TEST(CliMapEval, Failures) {
  EXPECT_EQ(run({"map", "eval", "--map", map_path("counterexample"), "--point", "-1,0"}).code, 3);
  EXPECT_EQ(run({"map", "eval", "--map", map_path("identity"), "--point", "2,0"}).code, 3);
  EXPECT_EQ(run({"map", "eval", "--map", map_path("identity"), "--point", "0.1;0.2"}).code, 2);
  EXPECT_EQ(run({"map", "eval", "--map", "/nonexistent/map.json", "--point", "0,0"}).code, 2);
  EXPECT_EQ(run({"map", "eval", "--map", curve_path("diameter"), "--point", "0,0"}).code, 2);
  EXPECT_EQ(run({"map", "eval", "--map", map_path("identity")}).code, 2);
  EXPECT_EQ(run({"map", "eval", "--map", map_path("identity"), "--point", "0,0", "--tol", "bogus=1"}).code, 2);
}

TEST(CliUsage, BadInvocations) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"grid", "build", "--map", map_path("identity"), "--K"}).code, 2);
  EXPECT_EQ(run({"grid", "build", "--map", map_path("identity"), "--K", "3"}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(CliInv, CounterexampleDefaultScanFails) {
  const Invocation r = run({"inv", "check", "--map", map_path("counterexample")});
  ASSERT_EQ(r.code, 1) << r.err;
  const Json j = parse_json_text(r.out);
  EXPECT_EQ(j["failures"].get<int>(), 9);
  EXPECT_EQ(j["passes"].get<int>(), 0);
}

TEST(CliInv, IdentityPasses) {
  EXPECT_EQ(run({"inv", "check", "--map", map_path("identity")}).code, 0);
  EXPECT_EQ(run({"inv", "check", "--map", map_path("identity"), "--random", "10", "--seed", "3"}).code, 0);
}

TEST(CliInv, BadCircle) {
  EXPECT_EQ(run({"inv", "check", "--map", map_path("identity"), "--circle", "0.5,0.5,0.9"}).code, 2);
  EXPECT_EQ(run({"inv", "check", "--map", map_path("identity"), "--circle", "0.5,0.5"}).code, 2);
  EXPECT_EQ(run({"inv", "check", "--map", map_path("identity"), "--random", "3"}).code, 2);
}

TEST(CliInjectify, ShearWithinBound) {
  const Invocation r = run({"injectify", "run", "--map", map_path("shear_0.5"), "--K", "3", "--eta", "0.2", "--seed", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json j = parse_json_text(r.out);
  EXPECT_TRUE(j["report"]["injective"].get<bool>());
  EXPECT_LE(j["report"]["sup_error"].get<double>(), std::sqrt(2.0) * 0.2);
}

TEST(CliInjectify, CollapsedDiskReportsDuplicates) {
  const Invocation r = run({"injectify", "run", "--map", map_path("embedded_counterexample"), "--grid",
                     fixture("grids/uniform_k4.json"), "--eta", "0.1", "--seed", "1"});
  ASSERT_EQ(r.code, 1) << r.err;
  const Json j = parse_json_text(r.out);
  EXPECT_EQ(j["error"], "distinct-image-violation");
  EXPECT_FALSE(j.contains("gridmap"));
  EXPECT_FALSE(j["pairs"].empty());
}

TEST(CliInjectify, EtaTooLarge) {
  const Invocation r = run({"injectify", "run", "--map", map_path("shear_0.5"), "--K", "2", "--eta", "0.6", "--seed", "1"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("precondition"), std::string::npos);
}

TEST(CliInjectify, UnsupportedBoundary) {
  const std::string path = temp_path("wide_twist.json");
  write_text_file(path, R"({"kind":"twist","params":{"center":[0.5,0.5],"radius":0.8,"angle":1.0}})");
  EXPECT_EQ(run({"injectify", "run", "--map", path, "--K", "2", "--eta", "0.3", "--seed", "1"}).code, 1);
}

TEST(CliWitness, Examples) {
  EXPECT_EQ(run({"witness", "run", "--curve", curve_path("diameter"), "--eps", "0.05"}).code, 0);
  const Invocation nt = run({"witness", "run", "--curve", curve_path("non_transversal"), "--eps", "0.05"});
  EXPECT_EQ(nt.code, 1);
  EXPECT_EQ(parse_json_text(nt.out)["error"], "non-transversal-curve");
  const Invocation tiny = run({"witness", "run", "--curve", curve_path("diameter"), "--eps", "1e-9"});
  EXPECT_EQ(tiny.code, 1);
  EXPECT_EQ(parse_json_text(tiny.out)["error"], "epsilon-too-small-for-resolution");
}

TEST(CliWitness, WritesSvgAlongside) {
  const std::string out = temp_path("w.json"), svg = temp_path("w.svg");
  ASSERT_EQ(run({"witness", "run", "--curve", curve_path("s_curve"), "--eps", "0.1", "--out", out, "--svg", svg}).code, 0);
  const Json j = read_json_file(out);
  EXPECT_TRUE(j["report"]["pass"].get<bool>());
  EXPECT_EQ(count(slurp(svg), "<g>"), 2u);
}

TEST(CliRender, GridHasKPlusOneLinesEachWay) {
  const Invocation grid = run({"grid", "build", "--map", map_path("identity"), "--K", "4", "--seed", "1"});
  ASSERT_EQ(grid.code, 0);
  const std::string path = temp_path("grid.json");
  write_text_file(path, grid.out);
  const Invocation r = run({"render", "--in", path});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(count(r.out, "<line"), 10u);
}

TEST(CliRender, WitnessHasTwoPanels) {
  const Invocation w = run({"witness", "run", "--curve", curve_path("diameter"), "--eps", "0.1"});
  ASSERT_EQ(w.code, 0);
  const std::string path = temp_path("witness.json");
  write_text_file(path, w.out);
  const Invocation r = run({"render", "--in", path});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(count(r.out, "<g>"), 2u);
  EXPECT_NE(r.out.find("#2ca02c"), std::string::npos);
}

TEST(CliRender, Rejections) {
  const std::string empty = temp_path("empty.json"), other = temp_path("other.json");
  write_text_file(empty, R"({"closed": false, "vertices": []})");
  write_text_file(other, R"({"hello": 1})");
  EXPECT_EQ(run({"render", "--in", empty}).code, 2);
  EXPECT_EQ(run({"render", "--in", other}).code, 2);
}

TEST(CliGolden, ArtifactsMatchCommittedFiles) {
  struct Case {
    std::vector<std::string> args;
    std::string golden;
    int code;
  };
  const std::vector<Case> cases{
      {{"grid", "build", "--map", map_path("cavitation"), "--K", "4", "--seed", "7"}, "grid_cavitation_k4_s7.json", 0},
      {{"injectify", "run", "--map", map_path("shear_0.5"), "--K", "2", "--eta", "0.3", "--seed", "1", "--tol",
        "injectify.resolution=8"},
       "injectify_shear_k2.json",
       0},
      {{"inv", "check", "--map", map_path("counterexample"), "--tol", "inv_check.n_curve=64"},
       "inv_counterexample.json",
       1},
      {{"render", "--in", fixture("golden/grid_cavitation_k4_s7.json")}, "grid_cavitation_k4_s7.svg", 0},
  };
  for (const auto& c : cases) {
    const Invocation r = run(c.args);
    EXPECT_EQ(r.code, c.code) << c.golden;
    EXPECT_EQ(r.out, slurp(fixture("golden/" + c.golden))) << c.golden;
  }
}

TEST(CliDeterminism, RepeatedRunsAreByteIdentical) {
  const std::vector<std::vector<std::string>> cmds{
      {"injectify", "run", "--map", map_path("twist"), "--K", "3", "--eta", "0.2", "--seed", "5"},
      {"inv", "check", "--map", map_path("shear_0.5"), "--random", "12", "--seed", "9"},
      {"witness", "run", "--curve", curve_path("s_curve"), "--eps", "0.05"},
  };
  for (const auto& c : cmds) {
    const Invocation a = run(c), b = run(c);
    EXPECT_EQ(a.code, b.code);
    EXPECT_EQ(a.out, b.out);
    EXPECT_FALSE(a.out.empty());
  }
}

TEST(CliOutput, OutFileMatchesStdout) {
  const std::string path = temp_path("grid_out.json");
  const std::vector<std::string> base{"grid", "build", "--map", map_path("twist"), "--K", "3", "--seed", "2"};
  const Invocation a = run(base);
  auto with_out = base;
  with_out.insert(with_out.end(), {"--out", path});
  const Invocation b = run(with_out);
  EXPECT_EQ(b.code, 0);
  EXPECT_TRUE(b.out.empty());
  EXPECT_EQ(slurp(path), a.out);
}
