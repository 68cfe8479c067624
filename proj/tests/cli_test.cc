// Copyright 2026 The Typotrace Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <string>

#include <sys/wait.h>
#include <unistd.h>

#include "json.hpp"
#include "typotrace/encoder.h"
#include "typotrace/util.h"

namespace typotrace {
namespace {

namespace fs = std::filesystem;

struct RunResult {
  int code = -1;
  std::string out;
};

RunResult RunCli(const std::string& args, const std::string& stdin_text = "") {
  std::string command = std::string(TYPOTRACE_CLI) + " " + args + " 2>/dev/null";
  if (!stdin_text.empty()) {
    command = "printf '" + stdin_text + "' | " + command;
  }
  RunResult r;
  FILE* pipe = ::popen(command.c_str(), "r");
  if (pipe == nullptr) return r;
  char buf[4096];
  for (std::size_t n; (n = std::fread(buf, 1, sizeof(buf), pipe)) > 0;) r.out.append(buf, n);
  const int status = ::pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("typotrace_cli_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
    list_ = dir_ / "list.txt";
    AtomicWriteFile(list_, "google.com\nfacebook.com\namazon.com\nyoutube.com\nbbc.co.uk\n");
  }
  void TearDown() override { fs::remove_all(dir_); }

  // A small model saved in the standard weight format.
  fs::path TinyModel() {
    EncoderConfig config;
    config.layers = {
        LayerSpec::Conv(4, 4, 8, 3, 5, Padding::kValid, Activation::kLeakyRelu),
        LayerSpec::Dense(32, Activation::kTanh),
        LayerSpec::Dense(16, Activation::kL2Normalize),
    };
    const fs::path path = dir_ / "tiny.tsw";
    SaveWeights(InitWeights<float>(config, 2), path);
    return path;
  }

  std::string Arg(const fs::path& p) const { return "'" + p.string() + "'"; }

  fs::path dir_;
  fs::path list_;
};

TEST_F(CliTest, UsageErrorsExitOne) {
  EXPECT_EQ(RunCli("").code, 1);
  EXPECT_EQ(RunCli("frobnicate").code, 1);
  EXPECT_EQ(RunCli("render --out x.png").code, 1);
  EXPECT_EQ(RunCli("render --domain a.com --out x.png --bogus").code, 1);
  EXPECT_EQ(RunCli("query --model a --index b").code, 1);
}

TEST_F(CliTest, DataErrorsExitTwo) {
  EXPECT_EQ(RunCli("render --domain 'bad_name.com' --out " + Arg(dir_ / "x.png")).code, 2);
  const fs::path junk = dir_ / "junk.tsw";
  AtomicWriteFile(junk, "garbage");
  EXPECT_EQ(RunCli("index --model " + Arg(junk) + " --checklist " + Arg(list_) +
                   " --out " + Arg(dir_ / "i.tsi"))
                .code,
            2);
  EXPECT_FALSE(fs::exists(dir_ / "i.tsi"));
}

TEST_F(CliTest, RenderIsByteIdentical) {
  const fs::path a = dir_ / "a.png", b = dir_ / "b.png";
  ASSERT_EQ(RunCli("render --domain facebook.com --out " + Arg(a) + " --seed 7").code, 0);
  ASSERT_EQ(RunCli("render --domain facebook.com --out " + Arg(b) + " --seed 7").code, 0);
  EXPECT_EQ(ReadFileBytes(a), ReadFileBytes(b));
  fs::path meta = a;
  meta += ".meta.json";
  const auto json = nlohmann::json::parse(ReadFileBytes(meta));
  EXPECT_EQ(json["seed"], 7);
  EXPECT_EQ(json["version"], TYPOTRACE_VERSION);
}

TEST_F(CliTest, TrainHonoursPositiveSource) {
  const fs::path pairs = dir_ / "pairs.tsv", model = dir_ / "m.tsw";
  ASSERT_EQ(RunCli("gen-train --domains " + Arg(list_) +
                   " --top 2 --rules omission --seed 1 --out " + Arg(pairs))
                .code,
            0);
  const std::string common = "train --pairs " + Arg(pairs) + " --checklist " + Arg(list_) +
                             " --bn 2 --batch 8 --out " + Arg(model);
  EXPECT_EQ(RunCli(common + " --positive sideways").code, 1);
  ASSERT_EQ(RunCli(common + " --positive live").code, 0);
  fs::path report = model;
  report += ".report.txt";
  EXPECT_NE(ReadFileBytes(report).find("positive_source: live"), std::string::npos);
  ASSERT_EQ(RunCli(common).code, 0);
  EXPECT_NE(ReadFileBytes(report).find("positive_source: bank"), std::string::npos);
  fs::path meta = model;
  meta += ".meta.json";
  EXPECT_EQ(nlohmann::json::parse(ReadFileBytes(meta))["parameters"]["positive"], "bank");
}

TEST_F(CliTest, GeneratorsWriteArtifacts) {
  const fs::path pairs = dir_ / "pairs.tsv", test = dir_ / "test.tsv";
  ASSERT_EQ(RunCli("gen-train --domains " + Arg(list_) +
                   " --top 2 --rules omission --seed 1 --out " + Arg(pairs))
                .code,
            0);
  const std::string text = ReadFileBytes(pairs);
  EXPECT_NE(text.find("gogle.com\tgoogle.com"), std::string::npos);
  EXPECT_EQ(text.find("amazon"), std::string::npos);
  ASSERT_EQ(RunCli("gen-test --domains " + Arg(list_) + " --top 5 --out " + Arg(test)).code, 0);
  EXPECT_EQ(ReadFileBytes(test).rfind("candidate\tsource\tlabel\taction\tdetail\n", 0), 0u);
  fs::path meta = test;
  meta += ".meta.json";
  const auto json = nlohmann::json::parse(ReadFileBytes(meta));
  EXPECT_EQ(json["inputs"]["list.txt"], FileSha256Hex(list_));

  const fs::path out = dir_ / "baseline";
  ASSERT_EQ(RunCli("baseline --checklist " + Arg(list_) + " --testset " + Arg(test) +
                   " --out-dir " + Arg(out))
                .code,
            0);
  const auto metrics = nlohmann::json::parse(ReadFileBytes(out / "metrics.json"));
  const double p = metrics["prevalence"];
  EXPECT_NEAR(metrics["macro_f1"].get<double>(), p / (1 + p), 1e-6);
  EXPECT_TRUE(fs::exists(out / "roc.csv"));
}

TEST_F(CliTest, IndexQueryAndEval) {
  const fs::path model = TinyModel(), index = dir_ / "idx.tsi";
  ASSERT_EQ(RunCli("index --model " + Arg(model) + " --checklist " + Arg(list_) +
                   " --out " + Arg(index))
                .code,
            0);
  const RunResult self = RunCli("query --model " + Arg(model) + " --index " + Arg(index) +
                                " --domain google.com --json");
  ASSERT_EQ(self.code, 0);
  const auto json = nlohmann::json::parse(self.out);
  EXPECT_EQ(json["match"], "google.com");
  EXPECT_TRUE(json["flagged"].get<bool>());
  EXPECT_LT(json["distance"].get<double>(), 1e-4);
  EXPECT_EQ(json["runner_ups"].size(), 4u);

  const RunResult batch = RunCli("query --model " + Arg(model) + " --index " + Arg(index) +
                                     " --stdin --json",
                                 "gogle.com\\nbad_x.com\\namazon.com\\n");
  EXPECT_EQ(batch.code, 2);
  std::istringstream lines(batch.out);
  std::string line;
  int n = 0, errors = 0;
  while (std::getline(lines, line)) {
    ++n;
    errors += nlohmann::json::parse(line).contains("error");
  }
  EXPECT_EQ(n, 3);
  EXPECT_EQ(errors, 1);

  const fs::path test = dir_ / "test.tsv", out = dir_ / "eval";
  ASSERT_EQ(RunCli("gen-test --domains " + Arg(list_) + " --out " + Arg(test)).code, 0);
  ASSERT_EQ(RunCli("eval --model " + Arg(model) + " --index " + Arg(index) + " --testset " +
                   Arg(test) + " --out-dir " + Arg(out))
                .code,
            0);
  const std::string first = ReadFileBytes(out / "metrics.json");
  ASSERT_EQ(RunCli("--threads 2 eval --model " + Arg(model) + " --index " + Arg(index) +
                   " --testset " + Arg(test) + " --out-dir " + Arg(out))
                .code,
            0);
  EXPECT_EQ(ReadFileBytes(out / "metrics.json"), first);
  EXPECT_EQ(nlohmann::json::parse(first)["method"], "model");

  const fs::path emb = dir_ / "emb.tsv";
  ASSERT_EQ(RunCli("export-embeddings --model " + Arg(model) + " --domains " + Arg(list_) +
                   " --out " + Arg(emb))
                .code,
            0);
  const std::string rows = ReadFileBytes(emb);
  EXPECT_EQ(std::count(rows.begin(), rows.end(), '\n'), 5);
}

TEST_F(CliTest, IndexRejectsForeignModel) {
  const fs::path model = TinyModel(), index = dir_ / "idx.tsi";
  ASSERT_EQ(RunCli("index --model " + Arg(model) + " --checklist " + Arg(list_) +
                   " --out " + Arg(index))
                .code,
            0);
  const fs::path other = dir_ / "other.tsw";
  auto w = LoadWeights(model);
  w.tensors[0][0] += 1.0f;
  SaveWeights(w, other);
  EXPECT_EQ(RunCli("query --model " + Arg(other) + " --index " + Arg(index) +
                   " --domain google.com")
                .code,
            2);
}

}  // namespace
}  // namespace typotrace
