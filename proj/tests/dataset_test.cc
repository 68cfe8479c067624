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


#include "typotrace/dataset.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "typotrace/dld.h"
#include "typotrace/error.h"
#include "typotrace/keyboard.h"

namespace typotrace {
namespace {

const LabeledTestCase* Find(const std::vector<LabeledTestCase>& cases,
                            const std::string& candidate) {
  for (const auto& c : cases) {
    if (c.candidate == candidate) return &c;
  }
  return nullptr;
}

std::vector<DomainRecord> TopDomains(std::size_t n) {
  return IngestDomainList(TYPOTRACE_DATA_DIR "/top_domains.csv", n);
}

TEST(IngestTest, PlainList) {
  const auto records = ParseDomainList("a.com\nb.com\n", 1);
  ASSERT_EQ(records.size(), 1u);
  EXPECT_EQ(records[0], (DomainRecord{1, "a.com"}));
  EXPECT_EQ(ParseDomainList("a.com\nb.com\nc.com\nd.com\ne.com", 100).size(), 5u);
}

TEST(IngestTest, MajesticCsv) {
  const auto records = ParseDomainList(
      "GlobalRank,TldRank,Domain,TLD\n1,1,google.com,com\n2,2,facebook.com,com\n", 10);
  ASSERT_EQ(records.size(), 2u);
  EXPECT_EQ(records[0].name, "google.com");
  EXPECT_EQ(records[1].rank, 2);
}

TEST(IngestTest, SkipsInvalidHostnames) {
  std::size_t skipped = 0;
  const auto records =
      ParseDomainList("good.com\nbad_one.com\n-lead.com\nfine.org\n", 10, &skipped);
  EXPECT_EQ(skipped, 2u);
  EXPECT_EQ(DomainNames(records), (std::vector<std::string>{"good.com", "fine.org"}));
}

TEST(IngestTest, Errors) {
  try {
    ParseDomainList("Rank,Host\n1,a.com\n", 10);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNoDomainColumn);
  }
  try {
    ParseDomainList("", 10);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyResult);
  }
  EXPECT_THROW(IngestDomainList("/nonexistent/list.csv", 10), Error);
}

TEST(IngestTest, BundledListHasTwoHundred) {
  const auto records = TopDomains(1000);
  EXPECT_EQ(records.size(), 200u);
  EXPECT_EQ(records.front().name, "google.com");
  std::set<std::string> unique;
  for (const auto& r : records) unique.insert(r.name);
  EXPECT_EQ(unique.size(), records.size());
}

TEST(SplitTest, Suffixes) {
  const DomainParts a = SplitDomain("google.com");
  EXPECT_EQ(a.label, "google");
  EXPECT_EQ(a.suffix, ".com");
  const DomainParts b = SplitDomain("bbc.co.uk");
  EXPECT_EQ(b.label, "bbc");
  EXPECT_EQ(b.suffix, ".co.uk");
  const DomainParts c = SplitDomain("news.google.com");
  EXPECT_EQ(c.prefix, "news.");
  EXPECT_EQ(c.label, "google");
  EXPECT_EQ(c.With("gooogle"), "news.gooogle.com");
}

TEST(FuzzTest, OmissionEnumeratesDeletions) {
  const auto pairs =
      FuzzDomain({1, "abc.com"}, FuzzRules::None().Enable(FuzzRule::kOmission));
  std::set<std::string> typos;
  for (const auto& p : pairs) {
    EXPECT_EQ(p.source_domain, "abc.com");
    typos.insert(p.typo_domain);
  }
  EXPECT_EQ(typos, (std::set<std::string>{"bc.com", "ac.com", "ab.com"}));
}

TEST(FuzzTest, OutputIsDeduplicatedAndExcludesSource) {
  const auto pairs = FuzzDomain({1, "google.com"}, FuzzRules::All());
  std::set<std::string> typos;
  for (const auto& p : pairs) {
    EXPECT_NE(p.typo_domain, "google.com");
    EXPECT_TRUE(IsValidHostname(p.typo_domain)) << p.typo_domain;
    typos.insert(p.typo_domain);
  }
  EXPECT_EQ(typos.size(), pairs.size());
  EXPECT_TRUE(typos.count("gogle.com"));
  EXPECT_TRUE(typos.count("goolge.com"));
  EXPECT_TRUE(typos.count("g0ogle.com"));
  EXPECT_TRUE(typos.count("go0gle.com"));
}

TEST(FuzzTest, EveryPairIsCloseInEditDistance) {
  for (const auto& p : FuzzDomain({1, "facebook.com"}, FuzzRules::All())) {
    EXPECT_EQ(OsaDistance(p.typo_domain, p.source_domain), 1) << p.typo_domain;
  }
}

TEST(FuzzTest, ReplacementStaysOnNeighbouringKeys) {
  const auto records = TopDomains(40);
  const FuzzRules rules = FuzzRules::None().Enable(FuzzRule::kReplacement);
  for (const auto& r : records) {
    for (const auto& p : FuzzDomain(r, rules)) {
      ASSERT_EQ(p.typo_domain.size(), p.source_domain.size());
      int changed = 0;
      for (std::size_t i = 0; i < p.typo_domain.size(); ++i) {
        if (p.typo_domain[i] == p.source_domain[i]) continue;
        ++changed;
        ASSERT_LE(KeyboardDistance(p.typo_domain[i], p.source_domain[i]), 1);
      }
      ASSERT_EQ(changed, 1);
    }
  }
}

TEST(FuzzTest, PairsAreSmallEdits) {
  std::size_t total = 0, small = 0;
  for (const auto& r : TopDomains(200)) {
    for (const auto& p : FuzzDomain(r, FuzzRules::All())) {
      ++total;
      small += OsaDistance(p.typo_domain, p.source_domain) <= 2;
    }
  }
  EXPECT_GE(static_cast<double>(small), 0.99 * static_cast<double>(total));
}

TEST(FuzzTest, RuleParsing) {
  EXPECT_EQ(FuzzRules::Parse("all").ToString(), FuzzRules::All().ToString());
  const FuzzRules some = FuzzRules::Parse("omission,homoglyph");
  EXPECT_TRUE(some.enabled(FuzzRule::kOmission));
  EXPECT_TRUE(some.enabled(FuzzRule::kHomoglyph));
  EXPECT_FALSE(some.enabled(FuzzRule::kInsertion));
  try {
    FuzzRules::Parse("omission,bogus");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidArgument);
  }
}

TEST(FuzzTest, TrainingPairsRoundTrip) {
  const std::vector<DomainRecord> records = {{1, "ab.com"}};
  std::ostringstream out;
  EXPECT_EQ(GenerateTrainingPairs(records,
                                  FuzzRules::None().Enable(FuzzRule::kOmission), out),
            2u);
  const auto pairs = ParsePairs(out.str());
  ASSERT_EQ(pairs.size(), 2u);
  EXPECT_EQ(pairs[0].source_domain, "ab.com");
}

TEST(FuzzTest, DefaultRulesScale) {
  const auto records = TopDomains(200);
  std::size_t total = 0;
  for (const auto& r : records) total += FuzzDomain(r, FuzzRules::All()).size();
  EXPECT_GE(total, 20000u);
  EXPECT_LE(total, 60000u);
}

TEST(TestSetTest, LabellingRules) {
  const std::vector<DomainRecord> records = {{1, "google.com"}, {2, "facebook.com"}};
  const auto cases = GenerateTestSet(records);

  const auto* del = Find(cases, "gogle.com");
  ASSERT_NE(del, nullptr);
  EXPECT_EQ(del->label, TestLabel::kTypo);
  EXPECT_EQ(del->action, EditAction::kDeletion);
  EXPECT_EQ(del->source, "google.com");

  const auto* zero = Find(cases, "g0ogle.com");
  ASSERT_NE(zero, nullptr);
  EXPECT_EQ(zero->label, TestLabel::kTypo);
  EXPECT_EQ(zero->action, EditAction::kSubstitution);
  EXPECT_EQ(zero->kb_distance, 1);

  const auto* far = Find(cases, "fapebook.com");
  ASSERT_NE(far, nullptr);
  EXPECT_EQ(far->label, TestLabel::kBenign);
  EXPECT_EQ(far->kb_distance, 7);

  // a -> d sits at keyboard distance 2: neither typo nor benign.
  EXPECT_EQ(Find(cases, "fdcebook.com"), nullptr);
}

TEST(TestSetTest, EveryCaseIsOneEditFromItsSourceOnly) {
  const auto records = TopDomains(50);
  const auto cases = GenerateTestSet(records);
  ASSERT_FALSE(cases.empty());
  std::set<std::string> sources;
  for (const auto& r : records) sources.insert(r.name);
  std::set<std::string> seen;
  for (const auto& c : cases) {
    ASSERT_EQ(OsaDistance(c.candidate, c.source), 1) << c.candidate;
    ASSERT_EQ(LevenshteinDistance(c.candidate, c.source), 1) << c.candidate;
    ASSERT_FALSE(sources.count(c.candidate));
    ASSERT_TRUE(seen.insert(c.candidate).second) << c.candidate;
    ASSERT_TRUE(IsValidHostname(c.candidate)) << c.candidate;
    if (c.action == EditAction::kSubstitution) {
      ASSERT_EQ(*c.kb_distance, KeyboardDistance(c.from, c.to));
      ASSERT_TRUE(*c.kb_distance == 1 || *c.kb_distance > 3);
    }
    for (const auto& r : records) {
      if (r.name != c.source) ASSERT_GT(OsaDistance(c.candidate, r.name), 1);
    }
  }
}

TEST(TestSetTest, PrevalenceOnTopHundred) {
  const auto cases = GenerateTestSet(TopDomains(100));
  std::size_t typo = 0;
  for (const auto& c : cases) typo += c.label == TestLabel::kTypo;
  const double p = static_cast<double>(typo) / cases.size();
  EXPECT_GE(p, 0.35);
  EXPECT_LE(p, 0.55);
}

TEST(TestSetTest, BothAdjacencyIsStricter) {
  const std::vector<DomainRecord> records = {{1, "google.com"}};
  TestSetOptions both;
  both.adjacency = InsertionAdjacency::kBoth;
  auto count_typo_insertions = [](const std::vector<LabeledTestCase>& cases) {
    return std::count_if(cases.begin(), cases.end(), [](const auto& c) {
      return c.action == EditAction::kInsertion && c.label == TestLabel::kTypo;
    });
  };
  EXPECT_LT(count_typo_insertions(GenerateTestSet(records, both)),
            count_typo_insertions(GenerateTestSet(records)));
}

TEST(TestSetTest, TsvRoundTrip) {
  const auto cases = GenerateTestSet(TopDomains(5));
  const std::string text = FormatTestSet(cases);
  EXPECT_EQ(text.substr(0, text.find('\n')), "candidate\tsource\tlabel\taction\tdetail");
  EXPECT_EQ(ParseTestSet(text), cases);
  EXPECT_THROW(ParseTestSet("candidate\tsource\tlabel\taction\tdetail\na\tb\n"), Error);
}

TEST(TestSetTest, DetailString) {
  LabeledTestCase c;
  c.position = 2;
  c.from = 'o';
  c.to = '0';
  c.kb_distance = 1;
  EXPECT_EQ(c.Detail(), "pos=2;from=o;to=0;kb=1");
}

}  // namespace
}  // namespace typotrace
