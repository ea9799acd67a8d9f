// Copyright 2026 The dpaudit Authors
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

#include "dpaudit/dataset.h"

#include <cmath>
#include <filesystem>
#include <string>

#include "test_util.h"

namespace dpaudit {
namespace {

using ::dpaudit::testing::IsOk;
using ::dpaudit::testing::StatusIs;
using ::dpaudit::testing::TempDir;
using ::testing::HasSubstr;
using ::testing::Not;

TEST(SyntheticTest, ShapesAndDeterminism) {
  SyntheticSpec spec{500, 7, 3, 2.0, 99};
  auto a = GenerateSynthetic(spec);
  auto b = GenerateSynthetic(spec);
  ASSERT_THAT(a, IsOk());
  EXPECT_EQ(a->train, b->train);
  EXPECT_EQ(a->holdout, b->holdout);
  EXPECT_EQ(a->train.rows, 500);
  EXPECT_EQ(a->holdout.rows, 500);
  EXPECT_EQ(a->train.dim, 7);
  EXPECT_EQ(a->train.split, SplitTag::kTrain);
  EXPECT_EQ(a->holdout.split, SplitTag::kHoldout);
  EXPECT_THAT(a->train.Validate(), IsOk());
  EXPECT_NE(a->train.features, a->holdout.features);
  spec.seed = 100;
  EXPECT_NE(GenerateSynthetic(spec)->train.features, a->train.features);
}

TEST(SyntheticTest, BalancedLabelsInRange) {
  auto d = GenerateSynthetic({20000, 3, 4, 1.0, 5});
  std::vector<int> counts(4, 0);
  for (int y : d->train.labels) {
    ASSERT_GE(y, 0);
    ASSERT_LT(y, 4);
    ++counts[y];
  }
  for (int c : counts) EXPECT_NEAR(c / 20000.0, 0.25, 5 * std::sqrt(0.1875 / 20000));
}

TEST(SyntheticTest, RejectsBadSpec) {
  EXPECT_THAT(GenerateSynthetic({0, 3, 2, 1.0, 0}), Not(IsOk()));
  EXPECT_THAT(GenerateSynthetic({10, 0, 2, 1.0, 0}), Not(IsOk()));
  EXPECT_THAT(GenerateSynthetic({10, 3, 0, 1.0, 0}), Not(IsOk()));
  EXPECT_THAT(GenerateSynthetic({10, 3, 2, -1.0, 0}), Not(IsOk()));
}

TEST(CsvTest, ParsesHeaderlessRows) {
  auto d = ParseCsv("1,0.5,0.25\n0,0.1,0.9", SplitTag::kTrain);
  ASSERT_THAT(d, IsOk());
  EXPECT_EQ(d->rows, 2);
  EXPECT_EQ(d->dim, 2);
  EXPECT_EQ(d->classes, 2);
  EXPECT_EQ(d->labels, (std::vector<int>{1, 0}));
  EXPECT_EQ(d->features, (std::vector<double>{0.5, 0.25, 0.1, 0.9}));
}

TEST(CsvTest, HeaderIsSkipped) {
  auto plain = ParseCsv("1,0.5,0.25\n0,0.1,0.9\n", SplitTag::kHoldout);
  auto headed =
      ParseCsv("label,f1,f2\n1,0.5,0.25\n0,0.1,0.9\n", SplitTag::kHoldout);
  ASSERT_THAT(headed, IsOk());
  EXPECT_EQ(*plain, *headed);
}

TEST(CsvTest, ErrorsNameTheLine) {
  auto bad = ParseCsv("1,0.5,0.25,3\n0,0.1,0.9,2\n1,0.2,0.3\n", SplitTag::kTrain);
  ASSERT_THAT(bad, StatusIs(absl::StatusCode::kInvalidArgument));
  EXPECT_THAT(std::string(bad.status().message()), HasSubstr("line 3"));
  auto garbage = ParseCsv("1,0.5\n0,abc\n", SplitTag::kTrain);
  EXPECT_THAT(std::string(garbage.status().message()), HasSubstr("line 2"));
  EXPECT_THAT(ParseCsv("", SplitTag::kTrain), Not(IsOk()));
  EXPECT_THAT(ParseCsv("label,f1\n", SplitTag::kTrain), Not(IsOk()));
  EXPECT_THAT(ParseCsv("-1,0.5\n", SplitTag::kTrain), Not(IsOk()));
}

TEST(CsvTest, ExplicitClassCount) {
  auto d = ParseCsv("0,1\n1,2\n", SplitTag::kTrain, 5);
  ASSERT_THAT(d, IsOk());
  EXPECT_EQ(d->classes, 5);
  EXPECT_THAT(ParseCsv("7,1\n", SplitTag::kTrain, 5), Not(IsOk()));
}

TEST(CsvTest, WriteThenLoadRoundTrips) {
  const std::string dir = TempDir("csv");
  auto d = GenerateSynthetic({50, 4, 3, 1.5, 1});
  const std::string path = dir + "/train.csv";
  ASSERT_THAT(WriteCsv(d->train, path), IsOk());
  auto back = LoadCsv(path, SplitTag::kTrain, 3);
  ASSERT_THAT(back, IsOk());
  EXPECT_EQ(*back, d->train);
  auto text = ReadFile(path);
  EXPECT_EQ(text->substr(0, 18), "label,f1,f2,f3,f4\n");
}

TEST(CsvTest, LossesCsvHasHeader) {
  const std::string path = TempDir("losses") + "/l.csv";
  ASSERT_THAT(WriteLossesCsv(std::vector<double>{0.5, 1.25}, path), IsOk());
  EXPECT_EQ(*ReadFile(path), "loss\n0.5\n1.25\n");
}

TEST(FileTest, MissingFileIsReported) {
  auto r = ReadFile("/nonexistent/dir/x.csv");
  ASSERT_THAT(r, Not(IsOk()));
  EXPECT_THAT(std::string(r.status().message()), HasSubstr("/nonexistent/dir/x.csv"));
  EXPECT_THAT(WriteFile("/nonexistent/dir/y.csv", "x"), Not(IsOk()));
}

TEST(DatasetTest, ValidateCatchesInconsistency) {
  Dataset d;
  d.rows = 2;
  d.dim = 1;
  d.classes = 2;
  d.features = {0.0, 1.0};
  d.labels = {0, 2};
  EXPECT_THAT(d.Validate(), Not(IsOk()));
  d.labels = {0, 1};
  EXPECT_THAT(d.Validate(), IsOk());
  d.features[0] = std::nan("");
  EXPECT_THAT(d.Validate(), Not(IsOk()));
}

}  // namespace
}  // namespace dpaudit
