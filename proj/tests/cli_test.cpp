#include <gtest/gtest.h>

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include <unistd.h>

#include "hueseg/cli.hpp"
#include "hueseg/evalkit.hpp"
#include "hueseg/imgio.hpp"
#include "oracles.hpp"

namespace hueseg {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "hueseg");
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / ("hueseg_cli_" + std::string(info->name()) + "_" +
                                        std::to_string(::getpid()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  void write_scene(const std::string& image, const std::string& truth, const SynthSpec& spec) {
    const auto scene = synth_scene(spec);
    fs::create_directories(fs::path(image).parent_path());
    fs::create_directories(fs::path(truth).parent_path());
    write_file(image, write_ppm(scene.image));
    write_file(truth, write_mask(scene.truth));
  }

  fs::path dir_;
};

TEST_F(CliTest, SegmentWithDefaults) {
  SynthSpec spec;
  write_scene(path("in.ppm"), path("gt.pgm"), spec);
  const auto r = run({"segment", path("in.ppm"), "-o", path("out.ppm"), "--mask", path("mask.pgm"),
                      "--raw-mask", path("raw.pgm"), "--report", path("rec.json"),
                      "--deterministic"});
  ASSERT_EQ(r.code, 0) << r.err;
  const SegMask raw = read_mask(read_file(path("raw.pgm")));
  const SegMask truth = read_mask(read_file(path("gt.pgm")));
  EXPECT_TRUE((raw == truth).all());
  const SegMask mask = read_mask(read_file(path("mask.pgm")));
  EXPECT_TRUE((mask == oracle::median(truth, 3, 1)).all());
  EXPECT_EQ(read_ppm(read_file(path("out.ppm"))).width(), 64);

  const auto report = nlohmann::json::parse(read_file(path("rec.json")));
  EXPECT_EQ(report["tool_version"], cli::kToolVersion);
  ASSERT_EQ(report["records"].size(), 1u);
  const auto& rec = report["records"][0];
  EXPECT_EQ(rec["config"]["threshold"], 5);
  EXPECT_EQ(rec["config"]["border"], 1);
  EXPECT_EQ(rec["config"]["median_kernel"], 3);
  EXPECT_EQ(rec["config"]["median_passes"], 1);
  EXPECT_EQ(rec["config"]["tolerance"], 0);
  EXPECT_EQ(rec["config"]["fill"], nlohmann::json::array({0, 0, 0}));
  EXPECT_EQ(rec["background"]["bins"], nlohmann::json::array({85}));
  EXPECT_EQ(rec["background"]["achromatic"], false);
  EXPECT_EQ(rec["pixels"]["foreground"], 396);
  EXPECT_EQ(rec["pixels"]["background"], 64 * 64 - 396);
  EXPECT_EQ(rec["wall_time_ms"], 0.0);
}

TEST_F(CliTest, SegmentEvenMedianIsConfigError) {
  write_file(path("in.ppm"), write_ppm(synth_scene({}).image));
  const auto r = run({"segment", path("in.ppm"), "-o", path("out.ppm"), "--median", "4"});
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("--median"), std::string::npos);
  EXPECT_NE(r.err.find("median_kernel"), std::string::npos);
  EXPECT_NE(r.err.find("odd"), std::string::npos);
  EXPECT_FALSE(fs::exists(path("out.ppm")));
}

TEST_F(CliTest, SegmentBorderTooThickNamesFlag) {
  write_file(path("in.ppm"), write_ppm(synth_scene({}).image));
  const auto r = run({"segment", path("in.ppm"), "-o", path("out.ppm"), "--border", "32"});
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("--border"), std::string::npos);
}

TEST_F(CliTest, SegmentMissingOrCorruptInputIsIoError) {
  EXPECT_EQ(run({"segment", path("nope.ppm"), "-o", path("out.ppm")}).code, 2);
  write_file(path("bad.ppm"), Bytes{'P', '6', '\n', '9'});
  EXPECT_EQ(run({"segment", path("bad.ppm"), "-o", path("out.ppm")}).code, 2);
}

TEST_F(CliTest, UnknownFlagIsRejected) {
  write_file(path("in.ppm"), write_ppm(synth_scene({}).image));
  EXPECT_EQ(run({"segment", path("in.ppm"), "-o", path("out.ppm"), "--thresh", "5"}).code, 3);
  EXPECT_EQ(run({}).code, 3);
}

TEST_F(CliTest, HelpListsDefaults) {
  const auto r = run({"segment", "--help"});
  EXPECT_EQ(r.code, 0);
  for (const char* needle : {"--border", "--threshold", "--tolerance", "--median", "--passes",
                             "--fill", "0,0,0", "--deterministic"}) {
    EXPECT_NE(r.out.find(needle), std::string::npos) << needle;
  }
  EXPECT_NE(r.out.find("[5]"), std::string::npos);
  EXPECT_NE(r.out.find("[3]"), std::string::npos);
}

TEST_F(CliTest, SynthWritesSceneAndTruth) {
  const std::vector<std::string> args = {"synth", "--size", "64x64", "--bg-bin", "85",
                                         "--fg-bin", "0", "--rect", "22,22,20,20", "--seed", "7",
                                         "-o", path("s.ppm"), "--gt", path("s.pgm")};
  ASSERT_EQ(run(args).code, 0);
  EXPECT_EQ(read_mask(read_file(path("s.pgm"))).count(), 400);
  const Bytes first = read_file(path("s.ppm"));
  ASSERT_EQ(run(args).code, 0);
  EXPECT_EQ(read_file(path("s.ppm")), first);
}

TEST_F(CliTest, SynthRejectsBadSpecs) {
  EXPECT_EQ(run({"synth", "--rect", "50,50,20,20", "-o", path("s.ppm")}).code, 3);
  EXPECT_EQ(run({"synth", "--disk", "5,5,10", "-o", path("s.ppm")}).code, 3);
  EXPECT_EQ(run({"synth", "--size", "64by64", "--rect", "2,2,3,3", "-o", path("s.ppm")}).code, 3);
  EXPECT_EQ(run({"synth", "-o", path("s.ppm")}).code, 3);
  EXPECT_EQ(run({"synth", "--bg-bin", "3", "--fg-bin", "3", "--rect", "22,22,20,20", "-o",
                 path("s.ppm")})
                .code,
            3);
  EXPECT_FALSE(fs::exists(path("s.ppm")));
}

TEST_F(CliTest, EvalPrintsMetrics) {
  SegMask a = SegMask::Zero(4, 5), b = SegMask::Zero(4, 5), c = SegMask::Zero(4, 5);
  a.block(1, 1, 2, 2).setConstant(true);
  b.block(1, 2, 2, 2).setConstant(true);
  c(0, 4) = true;
  write_file(path("a.pgm"), write_mask(a));
  write_file(path("b.pgm"), write_mask(b));
  write_file(path("c.pgm"), write_mask(c));

  auto iou_of = [&](const std::string& p, const std::string& q) {
    const auto r = run({"eval", path(p), path(q)});
    EXPECT_EQ(r.code, 0) << r.err;
    return nlohmann::json::parse(r.out)["iou"].get<double>();
  };
  EXPECT_EQ(iou_of("a.pgm", "a.pgm"), 1.0);
  EXPECT_EQ(iou_of("a.pgm", "c.pgm"), 0.0);
  EXPECT_NEAR(iou_of("b.pgm", "a.pgm"), 1.0 / 3.0, 1e-9);

  const auto r = run({"eval", path("b.pgm"), path("a.pgm")});
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["tp"], 2);
  EXPECT_EQ(j["fp"], 2);
  EXPECT_EQ(j["fn"], 2);
  EXPECT_EQ(j["tn"], 14);
}

TEST_F(CliTest, EvalErrors) {
  write_file(path("a.pgm"), write_mask(SegMask::Zero(4, 5)));
  write_file(path("t.pgm"), write_mask(SegMask::Zero(5, 4)));
  EXPECT_EQ(run({"eval", path("a.pgm"), path("t.pgm")}).code, 4);
  EXPECT_EQ(run({"eval", path("a.pgm"), path("missing.pgm")}).code, 2);
}

TEST_F(CliTest, BatchScoresSyntheticCorpus) {
  const std::vector<SynthSpec> specs = {
      {64, 64, 85, 0, RectShape{22, 22, 20, 20}, 0.0, 1},
      {80, 60, 170, 30, DiskShape{40, 30, 18}, 0.0, 2},
      {50, 70, 10, 200, RectShape{5, 9, 30, 40}, 0.0, 3},
  };
  const std::vector<std::string> names = {"a.ppm", "sub/b.ppm", "sub/deeper/c.ppm"};
  for (std::size_t i = 0; i < specs.size(); ++i) {
    fs::path truth = fs::path(path("masks")) / names[i];
    truth.replace_extension(".pgm");
    write_scene(path("in/" + names[i]), truth.string(), specs[i]);
  }
  write_file(path("in/notes.txt"), Bytes{'x'});

  // Median disabled: the pipeline reproduces the ground truth exactly.
  auto r = run({"batch", path("in"), "-o", path("out"), "--masks-dir", path("masks"),
                "--report", path("exact.json"), "--median", "1", "--deterministic"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto report = nlohmann::json::parse(read_file(path("exact.json")));
  ASSERT_EQ(report["records"].size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(report["records"][i]["input"], names[i]);
    EXPECT_EQ(report["records"][i]["metrics"]["iou"], 1.0);
  }

  // Defaults: metrics equal those of the majority-filtered truth.
  r = run({"batch", path("in"), "-o", path("out"), "--masks-dir", path("masks"), "--report",
           path("default.json"), "--deterministic"});
  ASSERT_EQ(r.code, 0) << r.err;
  report = nlohmann::json::parse(read_file(path("default.json")));
  for (std::size_t i = 0; i < 3; ++i) {
    const auto truth = synth_scene(specs[i]).truth;
    const auto expected = score(oracle::median(truth, 3, 1), truth);
    const auto& rec = report["records"][i];
    EXPECT_EQ(rec["metrics"]["iou"].get<double>(), expected.iou);
    EXPECT_EQ(rec["metrics"]["fn"].get<Index>(), expected.fn);
    fs::path mask_rel = names[i];
    mask_rel.replace_extension(".mask.pgm");
    EXPECT_EQ(rec["outputs"]["mask"], mask_rel.generic_string());
    EXPECT_TRUE(fs::exists(fs::path(path("out")) / mask_rel));
    EXPECT_TRUE(fs::exists(fs::path(path("out")) / names[i]));
  }
}

TEST_F(CliTest, BatchEmptyDirectory) {
  fs::create_directories(path("empty"));
  const auto r = run({"batch", path("empty"), "-o", path("out"), "--deterministic"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto report = nlohmann::json::parse(read_file(path("out/report.json")));
  EXPECT_TRUE(report["records"].empty());
}

TEST_F(CliTest, BatchMissingDirectoryIsIoError) {
  EXPECT_EQ(run({"batch", path("absent"), "-o", path("out")}).code, 2);
}

TEST_F(CliTest, BatchRecordsPerImageFailures) {
  write_scene(path("in/good.ppm"), path("masks/good.pgm"), SynthSpec{});
  write_file(path("in/bad.ppm"), Bytes{'P', '6', ' ', '1'});
  write_file(path("in/tiny.ppm"), write_ppm(RgbImage(2, 2)));  // too small for any border
  const auto r = run({"batch", path("in"), "-o", path("out"), "--deterministic"});
  EXPECT_EQ(r.code, 5);
  const auto report = nlohmann::json::parse(read_file(path("out/report.json")));
  ASSERT_EQ(report["records"].size(), 3u);
  EXPECT_EQ(report["records"][0]["input"], "bad.ppm");
  EXPECT_EQ(report["records"][0]["status"], "error");
  EXPECT_EQ(report["records"][1]["status"], "ok");
  EXPECT_EQ(report["records"][2]["status"], "error");
}

TEST_F(CliTest, BatchReportIndependentOfWorkerCount) {
  for (int i = 0; i < 6; ++i) {
    SynthSpec spec;
    spec.width = 48 + 8 * i;
    spec.shape = DiskShape{spec.width / 2, 32, 12};
    spec.noise_fraction = 0.03;
    spec.seed = static_cast<std::uint64_t>(i);
    write_scene(path("in/s" + std::to_string(i) + ".ppm"),
                path("masks/s" + std::to_string(i) + ".pgm"), spec);
  }
  std::vector<Bytes> reports;
  for (const char* threads : {"1", "4"}) {
    ::setenv("HUESEG_THREADS", threads, 1);
    const std::string out = path(std::string("out") + threads);
    ASSERT_EQ(run({"batch", path("in"), "-o", out, "--masks-dir", path("masks"), "--report",
                   out + ".json", "--deterministic"})
                  .code,
              0);
    reports.push_back(read_file(out + ".json"));
  }
  ::unsetenv("HUESEG_THREADS");
  EXPECT_EQ(reports[0], reports[1]);
  for (int i = 0; i < 6; ++i) {
    const std::string name = "s" + std::to_string(i) + ".mask.pgm";
    EXPECT_EQ(read_file(path("out1/" + name)), read_file(path("out4/" + name)));
  }

  ::setenv("HUESEG_THREADS", "lots", 1);
  EXPECT_EQ(run({"batch", path("in"), "-o", path("out9")}).code, 3);
  ::unsetenv("HUESEG_THREADS");
}

}  // namespace
}  // namespace hueseg
