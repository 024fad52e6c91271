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

#include <cmath>
#include <set>

#include "leafsiam/error.hpp"
#include "leafsiam/split.hpp"
#include "leafsiam_testing.hpp"

namespace leafsiam {
namespace {

using testing::fake_manifest;

const std::vector<int> kTomatoCounts = {1702, 800, 1528, 762, 1417, 1124, 299, 4286, 1341, 1272};

std::set<std::string> paths(const DatasetManifest& m) {
  std::set<std::string> out;
  for (const auto& s : m.samples()) out.insert(s.path);
  return out;
}

TEST(Split, FullFractionIsIdentity) {
  const auto m = fake_manifest({5, 7});
  const auto r = make_split(m, {SplitMode::kFraction, 1.0, 10, "", 3});
  EXPECT_EQ(r.train, m);
  EXPECT_TRUE(r.eval.empty());
  EXPECT_EQ(r.eval.classes(), m.classes());
}

TEST(Split, HalfOf299) {
  const auto m = fake_manifest({299, 10});
  const auto [train, eval] = stratified_fraction(m, 0.5, 1);
  EXPECT_TRUE(train.counts()[0] == 149 || train.counts()[0] == 150);
  EXPECT_EQ(train.counts()[0] + eval.counts()[0], 299u);
}

TEST(Split, FractionIsStratifiedDisjointAndCovering) {
  const auto m = fake_manifest({17, 3, 40, 9, 2});
  for (double f : {0.5, 0.75, 0.8, 0.33, 1.0}) {
    for (std::uint64_t seed : {0u, 1u, 2u}) {
      const auto [train, eval] = stratified_fraction(m, f, seed);
      for (std::size_t c = 0; c < m.class_count(); ++c) {
        EXPECT_LE(std::abs(static_cast<double>(train.counts()[c]) - f * m.counts()[c]), 1.0);
        EXPECT_GE(train.counts()[c], 1u);
      }
      auto a = paths(train), b = paths(eval);
      EXPECT_EQ(a.size() + b.size(), m.size());
      for (const auto& p : a) EXPECT_EQ(b.count(p), 0u);
    }
  }
}

TEST(Split, Reproducible) {
  const auto m = fake_manifest({30, 30});
  EXPECT_EQ(stratified_fraction(m, 0.6, 9), stratified_fraction(m, 0.6, 9));
  EXPECT_NE(stratified_fraction(m, 0.6, 9).first, stratified_fraction(m, 0.6, 10).first);
  EXPECT_EQ(stratified_kfold(m, 5, 2), stratified_kfold(m, 5, 2));
}

TEST(Split, ZeroTrainingSamplesNamesTheClass) {
  DatasetManifest m({"big", "tiny"}, {{"/a", 0, Origin::kOriginal}, {"/b", 0, Origin::kOriginal},
                                      {"/c", 0, Origin::kOriginal}, {"/d", 1, Origin::kOriginal}});
  try {
    stratified_fraction(m, 0.3, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kSplit);
    EXPECT_NE(std::string(e.what()).find("tiny"), std::string::npos);
  }
}

TEST(Split, TenFoldsOnTomatoSizedManifest) {
  const auto m = fake_manifest(kTomatoCounts);
  ASSERT_EQ(m.size(), 14531u);
  const auto folds = stratified_kfold(m, 10, 4);
  ASSERT_EQ(folds.size(), 10u);
  std::set<std::string> seen;
  std::size_t total = 0;
  for (const auto& f : folds) {
    total += f.size();
    for (const auto& s : f.samples()) EXPECT_TRUE(seen.insert(s.path).second);
  }
  EXPECT_EQ(total, m.size());
  EXPECT_EQ(seen.size(), m.size());
  for (std::size_t c = 0; c < m.class_count(); ++c) {
    std::size_t lo = SIZE_MAX, hi = 0;
    for (const auto& f : folds) {
      lo = std::min(lo, f.counts()[c]);
      hi = std::max(hi, f.counts()[c]);
    }
    EXPECT_LE(hi - lo, 1u) << m.classes()[c];
  }
  std::size_t lo = SIZE_MAX, hi = 0;
  for (const auto& f : folds) {
    lo = std::min(lo, f.size());
    hi = std::max(hi, f.size());
  }
  EXPECT_LE(hi - lo, 1u);
}

TEST(Split, FoldTrainEvalPartitions) {
  const auto m = fake_manifest({12, 8});
  const auto folds = stratified_kfold(m, 4, 0);
  for (std::size_t k = 0; k < folds.size(); ++k) {
    const auto [train, eval] = fold_train_eval(folds, k);
    EXPECT_EQ(eval, folds[k]);
    EXPECT_EQ(train.size() + eval.size(), m.size());
    for (const auto& p : paths(eval)) EXPECT_EQ(paths(train).count(p), 0u);
  }
  EXPECT_THROW(fold_train_eval(folds, 4), Error);
}

TEST(Split, KFoldModeReturnsFolds) {
  const auto r = make_split(fake_manifest({10, 10}), {SplitMode::kKFold, 1.0, 10, "", 0});
  EXPECT_EQ(r.folds.size(), 10u);
  for (const auto& f : r.folds) EXPECT_EQ(f.counts(), (std::vector<std::size_t>{1, 1}));
}

TEST(Split, DedicatedTestManifest) {
  testing::TempDir dir("split");
  const auto train = fake_manifest({4, 4});
  DatasetManifest test(train.classes(), {{"/t/1.png", 1, Origin::kOriginal}});
  save_manifest(test, dir / "test.json");
  const auto r = make_split(train, {SplitMode::kDedicatedTest, 1.0, 10, (dir / "test.json").string(), 0});
  EXPECT_EQ(r.train, train);
  EXPECT_EQ(r.eval, test);
  save_manifest(DatasetManifest({"other", "names"}, {}), dir / "bad.json");
  EXPECT_THROW(make_split(train, {SplitMode::kDedicatedTest, 1.0, 10, (dir / "bad.json").string(), 0}), Error);
}

TEST(Split, InvalidSpecsRaise) {
  const auto m = fake_manifest({4, 4});
  EXPECT_THROW(make_split(m, {SplitMode::kFraction, 0.0, 10, "", 0}), Error);
  EXPECT_THROW(make_split(m, {SplitMode::kFraction, 1.5, 10, "", 0}), Error);
  EXPECT_THROW(make_split(m, {SplitMode::kKFold, 1.0, 1, "", 0}), Error);
  EXPECT_THROW(make_split(m, {SplitMode::kDedicatedTest, 1.0, 10, "", 0}), Error);
  EXPECT_THROW(make_split(DatasetManifest({"a"}, {}), {}), Error);
  EXPECT_THROW(stratified_kfold(fake_manifest({2, 1}), 4, 0), Error);
  EXPECT_EQ(split_mode_from_string(to_string(SplitMode::kKFold)), SplitMode::kKFold);
  EXPECT_THROW(split_mode_from_string("random"), Error);
}

}  // namespace
}  // namespace leafsiam
