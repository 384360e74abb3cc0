// Copyright 2026 The forensic-eval Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "forensic_eval/image_io.hpp"
#include "forensic_eval/manifest.hpp"
#include "forensic_eval/report.hpp"
#include "test_support.hpp"

namespace fe {
namespace {

namespace fs = std::filesystem;
using testing::TempDir;

struct CliResult {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Runs the CLI with `cwd` as working directory.
CliResult cli(const fs::path& cwd, const std::string& args) {
  const fs::path out = cwd / ".stdout", err = cwd / ".stderr";
  const std::string cmd = "cd '" + cwd.string() + "' && '" FORENSIC_EVAL_BIN "' " + args + " > '" +
                          out.string() + "' 2> '" + err.string() + "'";
  const int status = std::system(cmd.c_str());
  CliResult r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  fs::remove(out);
  fs::remove(err);
  return r;
}

std::set<std::string> entries(const fs::path& dir) {
  std::set<std::string> names;
  for (const auto& e : fs::directory_iterator(dir)) names.insert(e.path().filename().string());
  return names;
}

// Returns the value printed under `column` in a two-line aggregate table.
std::string table_value(const std::string& out, const std::string& column) {
  std::istringstream in(out);
  std::string line, header, values;
  while (std::getline(in, line)) {
    if (line.rfind("f1", 0) == 0 || line.rfind("level", 0) == 0) {
      header = line;
      std::getline(in, values);
      break;
    }
  }
  std::istringstream hs(header), vs(values);
  std::string h, v;
  while (hs >> h && vs >> v) {
    if (h == column) return v;
  }
  return "";
}

class CliTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = new TempDir("cli");
    const CliResult r = cli(dir_->path(), "synth --out corpus --count 20 --width 48 --height 40 --seed 3");
    ASSERT_EQ(r.code, 0) << r.err;
  }
  static void TearDownTestSuite() {
    delete dir_;
    dir_ = nullptr;
  }
  static const fs::path& root() { return dir_->path(); }
  static TempDir* dir_;
};

TempDir* CliTest::dir_ = nullptr;

TEST_F(CliTest, PerfectCorpusPrintsOne) {
  const CliResult r = cli(root(), "eval pixel --manifest corpus/manifest.json --preds corpus/preds/perfect --out perfect");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(table_value(r.out, "f1"), "1.0000");
  EXPECT_TRUE(fs::exists(root() / "perfect" / "pixel_report.csv"));
}

TEST_F(CliTest, PermuteOnComplementCorpus) {
  const CliResult r = cli(root(), "eval pixel --manifest corpus/manifest.json --preds corpus/preds/complement "
                            "--out complement --variants permute");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(table_value(r.out, "f1"), "0.0000");
  EXPECT_EQ(table_value(r.out, "permute_f1"), "1.0000");
}

TEST_F(CliTest, ReportsIdenticalAcrossWorkers) {
  const std::string base = "eval pixel --manifest corpus/manifest.json --preds corpus/preds/empty ";
  ASSERT_EQ(cli(root(), base + "--out w1 --workers 1").code, 0);
  ASSERT_EQ(cli(root(), base + "--out w8 --workers 8").code, 0);
  // The out path differs by name only; compare with it normalized.
  auto normalized = [&](const char* d) {
    auto j = nlohmann::json::parse(slurp(root() / d / "pixel_report.json"));
    j["config"].erase("out");
    return j.dump();
  };
  EXPECT_EQ(normalized("w1"), normalized("w8"));
  ASSERT_EQ(cli(root(), base + "--out w8 --workers 8").code, 0);
  const std::string first = slurp(root() / "w8" / "pixel_report.json");
  ASSERT_EQ(cli(root(), base + "--out w8 --workers 1").code, 0);
  EXPECT_EQ(slurp(root() / "w8" / "pixel_report.json"), first);
}

TEST_F(CliTest, ReportIsSelfDescribing) {
  ASSERT_EQ(cli(root(), "eval pixel --manifest corpus/manifest.json --preds corpus/preds/perfect --out desc").code, 0);
  const auto j = nlohmann::json::parse(slurp(root() / "desc" / "pixel_report.json"));
  EXPECT_EQ(j["config"]["threshold"], 0.5);
  EXPECT_EQ(j["config"]["preds"], "corpus/preds/perfect");
  EXPECT_FALSE(j["version"].get<std::string>().empty());
  EXPECT_EQ(j["inputs"]["manifest"], sha256_file(root() / "corpus" / "manifest.json"));
  EXPECT_EQ(j["inputs"]["masks"].get<std::string>().size(), 64u);
  EXPECT_EQ(j["per_sample"].size(), 20u);
}

TEST_F(CliTest, ConfigFilePrecedence) {
  write_text(root() / "cfg.json",
             R"({"eval": {"pixel": {"manifest": "corpus/manifest.json", "preds": "corpus/preds/perfect",
                 "out": "cfg_out", "threshold": 0.7, "mask_threshold": 0.4}}})");
  const CliResult r = cli(root(), "eval pixel --config cfg.json --threshold 0.6");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(slurp(root() / "cfg_out" / "pixel_report.json"));
  EXPECT_EQ(j["config"]["threshold"], 0.6);
  EXPECT_EQ(j["config"]["mask_threshold"], 0.4);
  EXPECT_EQ(cli(root(), "eval pixel --config missing.json").code, 1);
}

TEST_F(CliTest, ExitCodes) {
  EXPECT_EQ(cli(root(), "").code, 1);
  EXPECT_EQ(cli(root(), "eval pixel --manifest corpus/manifest.json").code, 1);
  EXPECT_EQ(cli(root(), "synth --out never").code, 1);
  EXPECT_EQ(cli(root(), "perturb --manifest corpus/manifest.json --kind blur --out never").code, 1);
  EXPECT_FALSE(fs::exists(root() / "never"));
  const CliResult missing = cli(root(), "eval pixel --manifest corpus/manifest.json --preds nowhere --out m");
  EXPECT_EQ(missing.code, 2);
  EXPECT_NE(missing.err.find("s00000"), std::string::npos);
  EXPECT_EQ(cli(root(), "eval pixel --manifest nope.json --preds corpus/preds/perfect --out m").code, 2);
  EXPECT_EQ(cli(root(), "--version").code, 0);
}

TEST_F(CliTest, WritesOnlyUnderOut) {
  TempDir clean("cli_clean");
  fs::create_directories(clean.path() / "in");
  fs::copy(root() / "corpus", clean.path() / "in" / "corpus", fs::copy_options::recursive);
  const auto before = entries(clean.path() / "in" / "corpus");
  ASSERT_EQ(cli(clean.path(), "eval pixel --manifest in/corpus/manifest.json --preds in/corpus/preds/perfect --out o1").code, 0);
  ASSERT_EQ(cli(clean.path(), "perturb --manifest in/corpus/manifest.json --kind noise --levels 0,5 --seed 1 --out o2").code, 0);
  ASSERT_EQ(cli(clean.path(), "synth --out o3 --count 2 --width 16 --height 16 --seed 1").code, 0);
  EXPECT_EQ(entries(clean.path()), (std::set<std::string>{"in", "o1", "o2", "o3"}));
  EXPECT_EQ(entries(clean.path() / "in" / "corpus"), before);
}

TEST_F(CliTest, PerturbIdentityLevelsCopyBytes) {
  const CliResult r = cli(root(), "perturb --manifest corpus/manifest.json --kind gaussian_blur --levels 0 --seed 9 --out pert");
  ASSERT_EQ(r.code, 0) << r.err;
  const Manifest m = load_manifest(root() / "corpus" / "manifest.json");
  for (const auto& s : m.samples) {
    EXPECT_EQ(read_file(root() / "pert" / "gaussian_blur" / "0" / (s.id + ".png")), read_file(m.resolve(s.image)));
  }
  ASSERT_EQ(cli(root(), "perturb --manifest corpus/manifest.json --kind noise --levels 0 --seed 9 --out pert").code, 0);
  EXPECT_EQ(read_file(root() / "pert" / "gaussian_noise" / "0" / "s00007.png"),
            read_file(root() / "corpus" / "images" / "s00007.png"));
}

TEST_F(CliTest, ReportMergesLevelsInOrder) {
  const std::string base = "eval pixel --manifest corpus/manifest.json --variants permute ";
  ASSERT_EQ(cli(root(), base + "--preds corpus/preds/perfect --out l0").code, 0);
  ASSERT_EQ(cli(root(), base + "--preds corpus/preds/complement --out l1").code, 0);
  ASSERT_EQ(cli(root(), base + "--preds corpus/preds/empty --out l2").code, 0);
  const CliResult r = cli(root(), "report --kind jpeg --levels 90,70,50 --out curve "
                            "--reports l0/pixel_report.json l1/pixel_report.json l2/pixel_report.json");
  ASSERT_EQ(r.code, 0) << r.err;
  const std::string wide = slurp(root() / "curve" / "curve_wide.csv");
  std::istringstream in(wide);
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(in, line)) lines.push_back(line);
  ASSERT_EQ(lines.size(), 4u);
  EXPECT_EQ(lines[0], "kind,level,f1,permute_f1,auc,accuracy,iou");
  EXPECT_EQ(lines[1].rfind("jpeg_compress,90,1,1,", 0), 0u);
  EXPECT_EQ(lines[2].rfind("jpeg_compress,70,0,1,", 0), 0u);
  EXPECT_EQ(lines[3].rfind("jpeg_compress,50,0,", 0), 0u);
  EXPECT_EQ(slurp(root() / "curve" / "curve.csv").rfind("kind,level,metric,value\n", 0), 0u);
  EXPECT_EQ(cli(root(), "report --kind jpeg --levels 90,70 --out c2 --reports l0/pixel_report.json").code, 2);
}

TEST(CliManifest, BuildValidateAndOrphans) {
  TempDir dir("cli_manifest");
  const fs::path ds = dir.path() / "ds";
  std::mt19937_64 rng(1);
  for (const char* id : {"a", "b", "c", "d"}) {
    write_file(ds / "images" / (std::string(id) + ".png"), encode_png(testing::random_rgb(rng, 12, 12)));
  }
  for (const char* id : {"a", "b", "c"}) {
    write_file(ds / "masks" / (std::string(id) + ".png"), encode_png(testing::random_mask(rng, 12, 12)));
  }
  ASSERT_EQ(cli(dir.path(), "manifest build --dir ds --out ds").code, 0);
  const Manifest m = load_manifest(ds / "manifest.json");
  ASSERT_EQ(m.samples.size(), 4u);
  std::vector<Label> labels;
  for (const auto& s : m.samples) labels.push_back(s.label);
  EXPECT_EQ(labels, (std::vector<Label>{Label::manipulated, Label::manipulated, Label::manipulated,
                                        Label::authentic}));
  const std::string first = slurp(ds / "manifest.json");
  ASSERT_EQ(cli(dir.path(), "manifest build --dir ds --out ds").code, 0);
  EXPECT_EQ(slurp(ds / "manifest.json"), first);
  EXPECT_EQ(cli(dir.path(), "manifest validate ds/manifest.json").code, 0);

  write_file(ds / "masks" / "ghost.png", encode_png(BinaryMask(12, 12)));
  const CliResult orphan = cli(dir.path(), "manifest validate ds");
  EXPECT_EQ(orphan.code, 2);
  EXPECT_NE(orphan.err.find("ghost"), std::string::npos);
  EXPECT_EQ(cli(dir.path(), "manifest build --dir ds --out ds").code, 2);

  fs::remove(ds / "images" / "b.png");
  const CliResult gone = cli(dir.path(), "manifest validate ds/manifest.json");
  EXPECT_EQ(gone.code, 2);
  EXPECT_NE(gone.err.find("b.png"), std::string::npos);
}

TEST(CliCleanse, DuplicateFixture) {
  TempDir dir("cli_cleanse");
  testing::write_duplicate_corpus(dir.path() / "dup");
  const CliResult r = cli(dir.path(), "cleanse --manifest dup/manifest.json --out clean --threshold 0.9");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("kept 3 of 5"), std::string::npos);
  const Manifest cleansed = load_manifest(dir.path() / "clean" / "manifest.json");
  ASSERT_EQ(cleansed.samples.size(), 3u);
  EXPECT_TRUE(fs::exists(cleansed.resolve(cleansed.samples[0].image)));
  const auto groups = nlohmann::json::parse(slurp(dir.path() / "clean" / "groups.json"));
  EXPECT_EQ(groups["components"].size(), 3u);
  EXPECT_EQ(slurp(dir.path() / "clean" / "heatmap.csv").size() > 0, true);
  const CliResult again = cli(dir.path(), "cleanse --manifest clean/manifest.json --out clean2");
  EXPECT_NE(again.out.find("kept 3 of 3"), std::string::npos);
}

TEST(CliImage, ScoresCsv) {
  TempDir dir("cli_image");
  Manifest m;
  m.dataset = "img";
  m.samples = {{"p1", "p1.png", "p1_m.png", Label::manipulated},
               {"p2", "p2.png", "p2_m.png", Label::manipulated},
               {"n1", "n1.png", std::nullopt, Label::authentic},
               {"n2", "n2.png", std::nullopt, Label::authentic}};
  save_manifest(m, dir.path() / "manifest.json");
  write_text(dir.path() / "scores.csv", "id,score\np1,0.9\np2,0.4\nn1,0.6\nn2,0.1\n");
  const CliResult r = cli(dir.path(), "eval image --manifest manifest.json --scores scores.csv --out rep");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(table_value(r.out, "f1"), "0.5000");
  EXPECT_EQ(table_value(r.out, "auc"), "0.7500");
  write_text(dir.path() / "bad.csv", "id,score\np1,1.2\np2,0.4\nn1,0.6\nn2,0.1\n");
  EXPECT_EQ(cli(dir.path(), "eval image --manifest manifest.json --scores bad.csv --out rep").code, 2);
}

}  // namespace
}  // namespace fe
