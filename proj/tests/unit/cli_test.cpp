/**
 * Copyright 2026 The leafsiam Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */


#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "leafsiam/experiment.hpp"
#include "leafsiam_testing.hpp"

namespace leafsiam {
namespace {

namespace fs = std::filesystem;

struct Outcome {
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

Outcome run(const testing::TempDir& dir, const std::string& args) {
  const auto out = dir / "stdout.txt", err = dir / "stderr.txt";
  const std::string cmd = std::string("\"") + LEAFSIAM_CLI_PATH + "\" " + args + " >\"" + out.string() +
                          "\" 2>\"" + err.string() + "\"";
  const int status = std::system(cmd.c_str());
  Outcome o;
  o.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  o.out = slurp(out);
  o.err = slurp(err);
  return o;
}

TEST(Cli, MissingFolderIsInputError) {
  testing::TempDir dir("cli");
  const auto o = run(dir, "prepare /nonexistent/leaves");
  EXPECT_EQ(o.code, 2);
  EXPECT_NE(o.err.find("/nonexistent/leaves"), std::string::npos);
}

TEST(Cli, UnknownOptionIsInputError) {
  testing::TempDir dir("cli");
  EXPECT_EQ(run(dir, "train --bogus").code, 2);
  EXPECT_EQ(run(dir, "eval").code, 2);
}

TEST(Cli, InitPrintsLoadableConfig) {
  testing::TempDir dir("cli");
  const auto o = run(dir, "train --init --seed 9");
  ASSERT_EQ(o.code, 0);
  const auto cfg = config_from_json(o.out);
  EXPECT_EQ(cfg.train.seed, 9u);
  EXPECT_EQ(cfg.train.epochs, 10);
  const auto path = (dir / "cfg.json").string();
  ASSERT_EQ(run(dir, "--config " + path + " train --init").code, 0);
  EXPECT_EQ(load_config(path).train.batch_size, 8);
}

TEST(Cli, SynthPrepareAugment) {
  testing::TempDir dir("cli");
  const auto data = (dir / "data").string();
  auto o = run(dir, "synth --classes 2 --per-class 6 --seed 4 --out " + data);
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_EQ(load_manifest(dir / "data/manifest.json").size(), 12u);

  o = run(dir, "prepare " + data + " --manifest " + (dir / "scan.json").string());
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_NE(o.out.find("total"), std::string::npos);
  EXPECT_EQ(load_manifest(dir / "scan.json").size(), 12u);

  o = run(dir, "augment " + (dir / "data/manifest.json").string() + " --out " + (dir / "aug").string());
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_EQ(load_manifest(dir / "aug/manifest.json").size(), 96u);

  EXPECT_EQ(run(dir, "synth --classes 2 --per-class 3 --out " + (dir / "bad").string()).code, 2);
}

TEST(Cli, BadConfigIsInputError) {
  testing::TempDir dir("cli");
  std::ofstream(dir / "cfg.json") << R"({"dataset": "x"})";
  const auto o = run(dir, "--config " + (dir / "cfg.json").string() + " train");
  EXPECT_EQ(o.code, 2);
  EXPECT_NE(o.err.find("missing"), std::string::npos);
}

TEST(Cli, MissingCheckpointIsInputError) {
  testing::TempDir dir("cli");
  const auto o = run(dir, "eval --checkpoint " + (dir / "none.ckpt").string() + " --manifest " + dir.path().string());
  EXPECT_EQ(o.code, 2);
  EXPECT_NE(o.err.find("none.ckpt"), std::string::npos);
}

}  // namespace
}  // namespace leafsiam
