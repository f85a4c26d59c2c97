#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>

#include "bayesdl/core/errors.hpp"
#include "bayesdl/cli/config.hpp"
#include "bayesdl/cli/figure.hpp"
#include "bayesdl/cli/run.hpp"
#include "bayesdl/core/rng.hpp"

using namespace bayesdl;
using namespace bayesdl::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / "bdl_cli_tests" / name;
  fs::remove_all(p);
  return p;
}

int run_args(std::vector<std::string> args) {
  args.insert(args.begin(), "bdl");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data());
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

// Manifest lists every file in the directory (besides itself), each SVG has a CSV twin.
void expect_complete_run_dir(const fs::path& dir) {
  ASSERT_TRUE(fs::exists(dir / "manifest.txt")) << dir;
  ASSERT_TRUE(fs::exists(dir / "config.resolved.json")) << dir;
  const auto listed = lines(slurp(dir / "manifest.txt"));
  std::set<std::string> on_disk;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.path().filename() != "manifest.txt") on_disk.insert(e.path().filename().string());
  EXPECT_EQ(std::set<std::string>(listed.begin(), listed.end()), on_disk) << dir;
  for (const auto& f : on_disk) {
    if (fs::path(f).extension() == ".svg") {
      EXPECT_TRUE(on_disk.count(fs::path(f).replace_extension(".csv").string())) << f;
      EXPECT_EQ(slurp(dir / f).rfind("<svg", 0), 0u) << f;
    }
  }
}

std::set<std::string> fill_colors(const std::string& svg) {
  std::set<std::string> out;
  const std::regex rect("<rect[^>]*fill=\"(#[0-9a-f]{6})\"");
  for (auto it = std::sregex_iterator(svg.begin(), svg.end(), rect); it != std::sregex_iterator(); ++it)
    out.insert((*it)[1]);
  return out;
}

}  // namespace

TEST(Config, EmptyFileGivesDefaults) {
  const fs::path dir = scratch("config_empty");
  fs::create_directories(dir);
  std::ofstream(dir / "empty.json") << "";
  std::ofstream(dir / "obj.json") << "{}";
  EXPECT_EQ(resolve_config("train", dir / "empty.json", {}), default_config("train"));
  EXPECT_EQ(resolve_config("train", dir / "obj.json", {}), default_config("train"));
  EXPECT_EQ(default_config("train")["epochs"], 20);
  EXPECT_EQ(default_config("train")["batch_size"], 256);
}

TEST(Config, FlagsOverrideFile) {
  const fs::path dir = scratch("config_precedence");
  fs::create_directories(dir);
  std::ofstream(dir / "c.json") << R"({"epochs": 20, "lambda": 0.5})";
  const Json cfg = resolve_config("train", dir / "c.json", {{"epochs", "5"}});
  EXPECT_EQ(cfg["epochs"], 5);
  EXPECT_EQ(cfg["lambda"], 0.5);
}

TEST(Config, MisspelledKeyIsNamed) {
  const fs::path dir = scratch("config_typo");
  fs::create_directories(dir);
  std::ofstream(dir / "c.json") << R"({"epoches": 5})";
  try {
    resolve_config("train", dir / "c.json", {});
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("epoches"), std::string::npos);
  }
  std::ofstream(dir / "t.json") << R"({"epochs": "five"})";
  EXPECT_THROW(resolve_config("train", dir / "t.json", {}), ConfigError);
  std::ofstream(dir / "a.json") << R"([1, 2])";
  EXPECT_THROW(resolve_config("train", dir / "a.json", {}), ConfigError);
}

TEST(Config, ArrayOverrides) {
  const Json cfg = resolve_config("experiment ball", std::nullopt, {{"marginal_dims", "10,20"}});
  EXPECT_EQ(cfg["marginal_dims"], Json::array({10, 20}));
  EXPECT_EQ(flag_name("batch_size"), "batch-size");
}

TEST(Figure, HistogramOfNormalDraws) {
  Rng rng(1);
  const Vector x = prng_stream(rng, StreamKind::std_normal, 10000);
  const fs::path dir = scratch("figure_hist");
  fs::create_directories(dir);
  const auto files = emit_histogram(dir / "h.svg", x, 50, "normal draws");
  ASSERT_EQ(files.size(), 2u);
  const auto rows = lines(slurp(dir / "h.csv"));
  ASSERT_EQ(rows.size(), 51u);
  EXPECT_EQ(rows[0], "bin_left,bin_right,count");
  Index total = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) total += std::stol(rows[i].substr(rows[i].rfind(',') + 1));
  EXPECT_EQ(total, 10000);
  const Histogram h = histogram(x, 50);
  EXPECT_EQ(h.edges.size(), 51u);
  EXPECT_DOUBLE_EQ(h.edges.front(), x.minCoeff());
  EXPECT_DOUBLE_EQ(h.edges.back(), x.maxCoeff());
}

TEST(Figure, OneLineRasterHasTwoColors) {
  Matrix values(20, 20);
  for (Index i = 0; i < 20; ++i)
    for (Index j = 0; j < 20; ++j) values(i, j) = j < 8 ? 0 : 1;
  const fs::path dir = scratch("figure_raster");
  fs::create_directories(dir);
  emit_raster(dir / "r.svg", values, -1, 1, "one line");
  EXPECT_EQ(fill_colors(slurp(dir / "r.svg")).size(), 2u);
  EXPECT_TRUE(fs::exists(dir / "r.csv"));
}

TEST(Figure, EmptyDataRefused) {
  const fs::path dir = scratch("figure_empty");
  fs::create_directories(dir);
  EXPECT_THROW(emit_histogram(dir / "h.svg", Vector(0), 50, "empty"), DomainError);
  EXPECT_THROW(emit_lines(dir / "l.svg", {}, "t", "x", "y"), DomainError);
  EXPECT_THROW(emit_histogram("/proc/definitely/not/here.svg", Vector::Ones(3), 5, "t"), IoError);
}

TEST(Run, ExitCodes) {
  const fs::path dir = scratch("exit_codes");
  EXPECT_EQ(run_args({"frobnicate"}), kUsage);
  EXPECT_EQ(run_args({"train", "--epochs"}), kUsage);
  EXPECT_EQ(run_args({"train", "--out", (dir / "no_users").string()}), kDataError);
  EXPECT_EQ(run_args({"train", "--epochs", "x", "--out", (dir / "bad").string()}), kDataError);
  EXPECT_EQ(run_args({"experiment", "vi-toy", "--learning-rate", "1e6", "--steps", "50", "--out",
                      (dir / "diverge").string()}),
            kNumericalError);
  EXPECT_TRUE(fs::exists(dir / "diverge" / "manifest.txt"));
  EXPECT_TRUE(fs::exists(dir / "diverge" / "config.resolved.json"));
  EXPECT_EQ(run_args({"evaluate", "--predictions", (dir / "missing.csv").string(), "--out",
                      (dir / "eval").string()}),
            kDataError);
}

TEST(Run, PartitionReportsSevenRegions) {
  const fs::path dir = scratch("partition");
  testing::internal::CaptureStdout();
  const int code = run_args({"experiment", "partition", "--neurons", "3", "--seed", "7", "--grid-resolution",
                             "501", "--raster-resolution", "81", "--net-epochs", "100", "--dataset-n", "200",
                             "--out", dir.string()});
  const std::string out = testing::internal::GetCapturedStdout();
  EXPECT_EQ(code, kOk);
  EXPECT_NE(out.find("region_count = 7"), std::string::npos) << out;
  expect_complete_run_dir(dir);
}

TEST(Run, ExperimentSmoke) {
  const std::vector<std::vector<std::string>> cases = {
      {"ball", "--n", "2000", "--marginal-dims", "100,200", "--variance-dims", "2,50", "--ks-dims", "10,50"},
      {"dropout-ridge", "--draws", "2000"},
      {"vi-toy", "--steps", "300", "--gradient-draws", "1000"},
      {"identities", "--samples", "1000"},
      {"optzoo", "--steps", "50"},
  };
  for (const auto& c : cases) {
    const fs::path dir = scratch("exp_" + c[0]);
    std::vector<std::string> args = {"experiment"};
    args.insert(args.end(), c.begin(), c.end());
    args.insert(args.end(), {"--seed", "3", "--out", dir.string()});
    testing::internal::CaptureStdout();
    const int code = run_args(args);
    testing::internal::GetCapturedStdout();
    EXPECT_EQ(code, kOk) << c[0];
    expect_complete_run_dir(dir);
    EXPECT_TRUE(fs::exists(dir / "report.txt")) << c[0];
  }
}

TEST(Run, SynthTrainEvaluateEndToEnd) {
  const fs::path root = scratch("pipeline");
  testing::internal::CaptureStdout();
  ASSERT_EQ(run_args({"synth", "--n-users", "800", "--seed", "4", "--out", (root / "data").string()}), kOk);
  expect_complete_run_dir(root / "data");
  const std::vector<std::string> train = {"train", "--users", (root / "data" / "users.csv").string(),
                                          "--sessions", (root / "data" / "sessions.csv").string(),
                                          "--epochs", "3", "--hidden-units", "16", "--batch-size", "64",
                                          "--seed", "9"};
  auto with_out = [&](const std::string& name) {
    auto a = train;
    a.insert(a.end(), {"--out", (root / name).string()});
    return a;
  };
  ASSERT_EQ(run_args(with_out("train_a")), kOk);
  ASSERT_EQ(run_args(with_out("train_b")), kOk);
  expect_complete_run_dir(root / "train_a");
  for (const char* f : {"trace.csv", "predictions.csv", "metrics.csv", "topk.csv", "ndcg_by_class.csv"})
    EXPECT_EQ(slurp(root / "train_a" / f), slurp(root / "train_b" / f)) << f;
  EXPECT_EQ(lines(slurp(root / "train_a" / "trace.csv")).size(), 4u);

  // Oracle predictions: truth ranked first everywhere.
  std::ofstream(root / "oracle.csv") << "id,truth,rank1,rank2\nu1,US,US,FR\nu2,NDF,NDF,US\nu3,FR,FR,NDF\n";
  ASSERT_EQ(run_args({"evaluate", "--predictions", (root / "oracle.csv").string(), "--out",
                      (root / "eval").string()}),
            kOk);
  const std::string out = testing::internal::GetCapturedStdout();
  EXPECT_NE(out.find("ndcg = 1\n"), std::string::npos) << out;
  expect_complete_run_dir(root / "eval");
  const std::string predicted = (root / "train_a" / "predictions.csv").string();
  testing::internal::CaptureStdout();
  EXPECT_EQ(run_args({"evaluate", "--predictions", predicted, "--out", (root / "eval2").string()}), kOk);
  testing::internal::GetCapturedStdout();
}
