#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "blockprof/cli.hpp"
#include "fixtures.hpp"

using blockprof::run_cli;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  Run r;
  r.code = run_cli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string line_value(const std::string& text, const std::string& key) {
  const auto at = text.find(key + ": ");
  if (at == std::string::npos) return {};
  const auto start = at + key.size() + 2;
  return text.substr(start, text.find('\n', start) - start);
}

}  // namespace

TEST(Cli, SpacesListAndCount) {
  auto r = cli({"spaces", "list"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "ofa\nproxylessnas\nresnet50\n");
  r = cli({"spaces", "count", "--space", "ofa"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(line_value(r.out, "placements"), "180");
  EXPECT_EQ(line_value(r.out, "architectures"), "21,758,655,492,572,485,851");
  r = cli({"spaces", "count", "--space", "resnet50"});
  EXPECT_EQ(line_value(r.out, "architectures"), "136,606,377,609");
  r = cli({"spaces", "count", "--space", "ofa", "--include-resolutions"});
  EXPECT_EQ(line_value(r.out, "architectures"), "65,275,966,477,717,457,553");
  r = cli({"spaces", "count", "--space", "ofa", "--preset", "ofa-npu"});
  EXPECT_EQ(line_value(r.out, "placements"), "120");
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(cli({"spaces", "count", "--space", "mobilenet"}).code, 2);
  EXPECT_EQ(cli({"frobnicate"}).code, 2);
  EXPECT_EQ(cli({"--version"}).code, 0);
  EXPECT_EQ(cli({"--help"}).code, 0);
  fixtures::TempDir dir("cli-exit");
  const auto bad = cli({"--out", dir.str(), "profile", "placements", "--space", "ofa", "--percentiles", "105",
                        "--samples", "10"});
  EXPECT_EQ(bad.code, 2);
  EXPECT_FALSE(bad.err.empty());
  EXPECT_EQ(cli({"--out", dir.str(), "search", "max", "--space", "ofa", "--generations", "0"}).code, 2);
  EXPECT_EQ(cli({"reduce", "--space", "resnet50", "--preset", "ofa-npu"}).code, 2);
  EXPECT_EQ(cli({"--out", dir.str(), "profile", "blocks", "--space", "resnet50", "--metric", "npu"}).code, 2);
  EXPECT_EQ(cli({"--workers", "0", "spaces", "list"}).code, 2);
}

TEST(Cli, ProfilePlacementsWritesSweepAndManifest) {
  fixtures::TempDir dir("cli-sweep");
  const std::vector<std::string> args{"--out", dir.str(), "--seed", "3", "profile", "placements", "--space", "ofa",
                                      "--metric", "macs", "--percentiles", "5,95", "--samples", "20", "--plot-data"};
  const auto r = cli(args);
  ASSERT_EQ(r.code, 0) << r.err;
  const auto csv_path = dir.path() / "placements-ofa-macs.csv";
  const auto csv = slurp(csv_path);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 181);
  EXPECT_EQ(csv.rfind("unit,layer,block_code,mean_rel,p05_rel,p95_rel,", 0), 0u);
  EXPECT_TRUE(std::filesystem::exists(dir.path() / "placements-ofa-macs.boundaries.csv"));
  EXPECT_TRUE(std::filesystem::exists(dir.path() / "placements-ofa-macs.dat"));
  EXPECT_NE(r.out.find(csv_path.string()), std::string::npos);

  const auto manifest = nlohmann::json::parse(slurp(dir.path() / "placements-ofa-macs.manifest.json"));
  EXPECT_EQ(manifest["seed"], 3);
  EXPECT_EQ(manifest["outputs"].size(), 3u);
  EXPECT_EQ(manifest["spaces"][0]["name"], "ofa");

  const auto again = cli(args);
  ASSERT_EQ(again.code, 0);
  EXPECT_EQ(slurp(csv_path), csv);
}

TEST(Cli, ProfileBlocksPinnedResolution) {
  fixtures::TempDir dir("cli-blocks");
  const auto r = cli({"--out", dir.str(), "profile", "blocks", "--space", "ofa", "--metric", "npu", "--samples", "5",
                      "-R", "224"});
  // -R is not an option; the long form is --resolution.
  EXPECT_EQ(r.code, 2);
  const auto ok = cli({"--out", dir.str(), "profile", "blocks", "--space", "ofa", "--metric", "npu", "--samples",
                       "5", "--resolution", "224"});
  ASSERT_EQ(ok.code, 0) << ok.err;
  const auto csv = slurp(dir.path() / "blocks-ofa-npu.csv");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 10);
}

TEST(Cli, ReduceReportsCountsAndEmitsConfig) {
  fixtures::TempDir dir("cli-reduce");
  const auto r = cli({"--out", dir.str(), "reduce", "--space", "ofa", "--preset", "ofa-npu"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(line_value(r.out, "reduced_placements"), "120");
  EXPECT_EQ(line_value(r.out, "original_placements"), "180");
  EXPECT_EQ(line_value(r.out, "architectures_equal"), "no");
  const auto config = nlohmann::json::parse(slurp(dir.path() / "ofa-npu.space.json"));
  for (const auto& u : config["units"]) EXPECT_EQ(u["blocks"].size(), 6u);

  const auto rules = dir.path() / "empty.rules";
  std::ofstream(rules) << R"({"name":"empty","rules":[]})";
  const auto e = cli({"--out", dir.str(), "reduce", "--space", "ofa", "--rules", rules.string()});
  ASSERT_EQ(e.code, 0) << e.err;
  EXPECT_EQ(line_value(e.out, "architectures_equal"), "yes");
  EXPECT_EQ(line_value(e.out, "original_architectures"), line_value(e.out, "reduced_architectures"));

  // The emitted config loads as a space of its own.
  const auto c = cli({"spaces", "count", "--space", (dir.path() / "ofa-npu.space.json").string()});
  EXPECT_EQ(line_value(c.out, "placements"), "120");
}

TEST(Cli, SearchMaxRepeats) {
  fixtures::TempDir dir("cli-max");
  const auto r = cli({"--out", dir.str(), "search", "max", "--space", "ofa", "--preset", "ofa-maxacc", "--generations",
                      "2", "--pop", "6", "--children", "6", "--repeats", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("over 3 seeds"), std::string::npos) << r.out;
  const auto summary = slurp(dir.path() / "max-ofa-maxacc.csv");
  EXPECT_EQ(std::count(summary.begin(), summary.end(), '\n'), 4);
}

TEST(Cli, SearchParetoAndCompare) {
  fixtures::TempDir dir("cli-pareto");
  const auto r = cli({"--out", dir.str(), "--seed", "1", "search", "pareto", "--space", "ofa", "--preset", "ofa-npu",
                      "--objectives", "acc:max,npu:min", "--generations", "2", "--pop", "10", "--children", "10",
                      "--compare-base"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto a = dir.path() / "pareto-ofa-npu-s1.frontier.json";
  const auto b = dir.path() / "pareto-ofa-s1.frontier.json";
  ASSERT_TRUE(std::filesystem::exists(a));
  ASSERT_TRUE(std::filesystem::exists(b));
  const auto history = slurp(dir.path() / "pareto-ofa-npu-s1.history.csv");
  EXPECT_NE(history.find("\n2,30,"), std::string::npos) << history;
  const auto c = cli({"--out", dir.str(), "search", "compare", a.string(), b.string(), "--grid", "10"});
  EXPECT_EQ(c.code, 0) << c.err;
  const auto self = cli({"--out", dir.str(), "search", "compare", a.string(), a.string()});
  EXPECT_EQ(self.code, 0);
  EXPECT_NE(self.out.find("tie"), std::string::npos) << self.out;
}
