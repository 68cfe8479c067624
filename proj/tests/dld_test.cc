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


#include "typotrace/dld.h"

#include <gtest/gtest.h>

#include <string>
#include <vector>

#include "test_support.h"
#include "typotrace/error.h"

namespace typotrace {
namespace {

TEST(OsaTest, KnownValues) {
  EXPECT_EQ(OsaDistance("facebook.com", "fapebook.com"), 1);
  EXPECT_EQ(OsaDistance("facebook.com", "faceb0ok.com"), 1);
  EXPECT_EQ(OsaDistance("google.com", "google.com"), 0);
  EXPECT_EQ(OsaDistance("abc", "acb"), 1);
  EXPECT_EQ(OsaDistance("ca", "abc"), 3);
  EXPECT_EQ(OsaDistance("", "abc"), 3);
  EXPECT_EQ(OsaDistance("kitten", "sitting"), 3);
}

TEST(OsaTest, LevenshteinDiffersOnTransposition) {
  EXPECT_EQ(LevenshteinDistance("abc", "acb"), 2);
  EXPECT_EQ(LevenshteinDistance("kitten", "sitting"), 3);
}

TEST(OsaTest, MatchesOracleExhaustively) {
  const auto strings = testing::AllStrings("abcd", 4);
  for (const auto& a : strings) {
    for (const auto& b : strings) {
      ASSERT_EQ(OsaDistance(a, b), testing::OsaOracle(a, b)) << a << " " << b;
    }
  }
}

TEST(BaselineTest, ExactMatchIsNotFlagged) {
  const std::vector<std::string> list = {"google.com", "facebook.com"};
  const auto r = BaselineClassify("facebook.com", list);
  EXPECT_FALSE(r.flagged);
  EXPECT_EQ(r.distance, 0);
  EXPECT_EQ(r.match, "facebook.com");
  EXPECT_EQ(r.match_index, 1u);
}

TEST(BaselineTest, OneEditIsFlagged) {
  const std::vector<std::string> list = {"google.com", "facebook.com"};
  const auto r = BaselineClassify("gogle.com", list);
  EXPECT_TRUE(r.flagged);
  EXPECT_EQ(r.distance, 1);
  EXPECT_EQ(r.match, "google.com");
}

TEST(BaselineTest, FarCandidateIsClear) {
  const std::vector<std::string> list = {"abcd"};
  const auto r = BaselineClassify("wxyz", list, 1);
  EXPECT_FALSE(r.flagged);
  EXPECT_EQ(r.distance, 4);
}

TEST(BaselineTest, TiesResolveToLowestIndex) {
  const std::vector<std::string> list = {"ab.com", "ac.com"};
  EXPECT_EQ(BaselineClassify("a.com", list).match_index, 0u);
}

TEST(BaselineTest, EmptyListRejected) {
  try {
    BaselineClassify("a.com", {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmpty);
  }
}

}  // namespace
}  // namespace typotrace
