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

#ifndef TYPOTRACE_DATASET_H_
#define TYPOTRACE_DATASET_H_

#include <bitset>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "typotrace/trainer.h"

namespace typotrace {

struct DomainRecord {
  int rank = 0;
  std::string name;

  friend bool operator==(const DomainRecord&, const DomainRecord&) = default;
};

// Reads the first `top_n` valid domains from either a plain list (one domain
// per line) or a CSV whose header has a "Domain" column, as in the Majestic
// Million file. Invalid names are skipped and counted in `skipped`.
// Throws kIoError, kNoDomainColumn or kEmptyResult.
std::vector<DomainRecord> IngestDomainList(const std::filesystem::path& path,
                                           std::size_t top_n,
                                           std::size_t* skipped = nullptr);
std::vector<DomainRecord> ParseDomainList(std::string_view text,
                                          std::size_t top_n,
                                          std::size_t* skipped = nullptr);

std::vector<std::string> DomainNames(std::span<const DomainRecord> records);

bool IsValidHostname(std::string_view name);

// A domain split around its registrable label: "www.bbc.co.uk" gives
// prefix "www.", label "bbc", suffix ".co.uk".
struct DomainParts {
  std::string prefix;
  std::string label;
  std::string suffix;

  std::string With(std::string_view new_label) const {
    return prefix + std::string(new_label) + suffix;
  }
};
DomainParts SplitDomain(std::string_view domain);

enum class FuzzRule {
  kOmission,
  kInsertion,
  kReplacement,
  kTransposition,
  kRepetition,
  kVowelSwap,
  kHomoglyph,
};
inline constexpr int kFuzzRuleCount = 7;

class FuzzRules {
 public:
  static FuzzRules All();
  static FuzzRules None() { return FuzzRules(); }
  // Comma-separated rule names, or "all". Throws kInvalidArgument.
  static FuzzRules Parse(std::string_view list);

  FuzzRules& Enable(FuzzRule rule);
  bool enabled(FuzzRule rule) const {
    return bits_.test(static_cast<std::size_t>(rule));
  }
  std::string ToString() const;

 private:
  std::bitset<kFuzzRuleCount> bits_;
};

// Permutations of the registrable label; the rest of the name is kept.
// Output is deduplicated in first-seen order and never contains the source.
std::vector<TypoPair> FuzzDomain(const DomainRecord& record,
                                 const FuzzRules& rules);

// Writes "typo<TAB>source\n" lines. Returns the number of pairs.
std::size_t GenerateTrainingPairs(std::span<const DomainRecord> records,
                                  const FuzzRules& rules, std::ostream& out);
std::vector<TypoPair> ReadPairs(const std::filesystem::path& path);
std::vector<TypoPair> ParsePairs(std::string_view text);

enum class TestLabel { kTypo, kBenign };
enum class EditAction { kDeletion, kInsertion, kSubstitution };

struct LabeledTestCase {
  std::string candidate;
  std::string source;
  TestLabel label = TestLabel::kTypo;
  EditAction action = EditAction::kDeletion;
  int position = 0;   // index into the label
  char from = '\0';   // deleted or replaced character
  char to = '\0';     // inserted or substituted character
  std::optional<int> kb_distance;

  // "pos=2;from=o;to=0;kb=1" with absent fields omitted.
  std::string Detail() const;
  friend bool operator==(const LabeledTestCase&,
                         const LabeledTestCase&) = default;
};

enum class InsertionAdjacency {
  kMin,   // nearer of the two neighbours decides
  kBoth,  // both neighbours must satisfy the rule
};

struct TestSetOptions {
  InsertionAdjacency adjacency = InsertionAdjacency::kMin;
  int typo_distance = 1;     // kb distance labelled typo
  int benign_above = 3;      // kb distance strictly above this is benign
  // Drop candidates within this OSA distance of another source, so every
  // kept candidate has a unique nearest source.
  int ambiguity_radius = 1;
};

// Every single-edit (deletion, insertion, substitution over [a-z0-9-])
// variant of each record's label, labelled by keyboard distance.
std::vector<LabeledTestCase> GenerateTestSet(
    std::span<const DomainRecord> records, const TestSetOptions& options = {});

std::string_view TestLabelName(TestLabel label);
std::string_view EditActionName(EditAction action);

// Header "candidate\tsource\tlabel\taction\tdetail", one row per case.
std::string FormatTestSet(std::span<const LabeledTestCase> cases);
std::vector<LabeledTestCase> ParseTestSet(std::string_view text);
std::vector<LabeledTestCase> ReadTestSet(const std::filesystem::path& path);

}  // namespace typotrace

#endif  // TYPOTRACE_DATASET_H_
