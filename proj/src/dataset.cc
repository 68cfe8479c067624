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

#include <algorithm>
#include <array>
#include <charconv>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include "typotrace/dld.h"
#include "typotrace/error.h"
#include "typotrace/keyboard.h"
#include "typotrace/util.h"

namespace typotrace {

namespace {

// Characters a registrable label may contain.
constexpr std::string_view kLabelAlphabet =
    "abcdefghijklmnopqrstuvwxyz0123456789-";
constexpr std::string_view kVowels = "aeiou";

constexpr std::array<std::pair<char, char>, 8> kHomoglyphs = {{
    {'o', '0'}, {'l', '1'}, {'i', '1'}, {'e', '3'},
    {'a', '4'}, {'s', '5'}, {'b', '8'}, {'g', '9'},
}};

constexpr std::string_view kTwoLevelSuffixes[] = {
    "ac.uk",  "co.uk",  "gov.uk", "org.uk", "ltd.uk", "co.jp",  "ne.jp",
    "or.jp",  "ac.jp",  "com.au", "net.au", "org.au", "edu.au", "gov.au",
    "com.br", "gov.br", "com.cn", "co.in",  "co.kr",  "com.tw", "com.mx",
    "co.za",  "com.tr", "com.ar", "co.nz",  "com.sg", "com.hk", "co.id",
};

std::vector<std::string_view> SplitView(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' ||
                        s.front() == '\r' || s.front() == '"')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' ||
                        s.back() == '\r' || s.back() == '"')) {
    s.remove_suffix(1);
  }
  return s;
}

std::string Lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = FoldCase(c);
  return out;
}

bool IsValidLabel(std::string_view label) {
  if (label.empty() || label.size() > 63) return false;
  if (label.front() == '-' || label.back() == '-') return false;
  return std::all_of(label.begin(), label.end(), [](char c) {
    return kLabelAlphabet.find(c) != std::string_view::npos;
  });
}

}  // namespace

bool IsValidHostname(std::string_view name) {
  if (name.empty() || name.size() > 253) return false;
  const auto labels = SplitView(name, '.');
  if (labels.size() < 2) return false;
  return std::all_of(labels.begin(), labels.end(), IsValidLabel);
}

std::vector<DomainRecord> ParseDomainList(std::string_view text,
                                          std::size_t top_n,
                                          std::size_t* skipped) {
  std::vector<std::string_view> lines = SplitView(text, '\n');
  std::size_t first = 0;
  std::optional<std::size_t> column;
  // Skip leading blank lines when sniffing for a CSV header.
  while (first < lines.size() && Trim(lines[first]).empty()) ++first;
  if (first < lines.size() &&
      lines[first].find(',') != std::string_view::npos) {
    const auto header = SplitView(lines[first], ',');
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (Lower(Trim(header[i])) == "domain") column = i;
    }
    if (!column) {
      throw Error(ErrorCode::kNoDomainColumn,
                  "CSV header has no \"Domain\" column");
    }
    ++first;
  }
  std::vector<DomainRecord> records;
  std::size_t bad = 0;
  for (std::size_t i = first; i < lines.size() && records.size() < top_n; ++i) {
    std::string_view field = Trim(lines[i]);
    if (field.empty()) continue;
    if (column) {
      const auto cells = SplitView(lines[i], ',');
      if (*column >= cells.size()) {
        ++bad;
        continue;
      }
      field = Trim(cells[*column]);
    }
    std::string name = Lower(field);
    if (!IsValidHostname(name)) {
      ++bad;
      continue;
    }
    records.push_back({static_cast<int>(records.size()) + 1, std::move(name)});
  }
  if (skipped != nullptr) *skipped = bad;
  if (records.empty()) {
    throw Error(ErrorCode::kEmptyResult, "no valid domains in list");
  }
  return records;
}

std::vector<DomainRecord> IngestDomainList(const std::filesystem::path& path,
                                           std::size_t top_n,
                                           std::size_t* skipped) {
  return ParseDomainList(ReadFileBytes(path), top_n, skipped);
}

std::vector<std::string> DomainNames(std::span<const DomainRecord> records) {
  std::vector<std::string> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(r.name);
  return out;
}

DomainParts SplitDomain(std::string_view domain) {
  const auto labels = SplitView(domain, '.');
  DomainParts parts;
  if (labels.size() < 2) {
    parts.label = std::string(domain);
    return parts;
  }
  std::size_t suffix_labels = 1;
  if (labels.size() >= 3) {
    const std::string last_two = std::string(labels[labels.size() - 2]) + "." +
                                 std::string(labels.back());
    for (std::string_view s : kTwoLevelSuffixes) {
      if (s == last_two) suffix_labels = 2;
    }
  }
  const std::size_t label_at = labels.size() - 1 - suffix_labels;
  for (std::size_t i = 0; i < label_at; ++i) {
    parts.prefix += std::string(labels[i]) + ".";
  }
  parts.label = std::string(labels[label_at]);
  for (std::size_t i = label_at + 1; i < labels.size(); ++i) {
    parts.suffix += "." + std::string(labels[i]);
  }
  return parts;
}

// ---------------------------------------------------------------------------
// Fuzzer.

namespace {

constexpr std::array<std::string_view, kFuzzRuleCount> kRuleNames = {
    "omission",   "insertion", "replacement", "transposition",
    "repetition", "vowel-swap", "homoglyph",
};

bool Near(char a, char b) { return KeyboardDistance(a, b) <= 1; }

class CandidateSet {
 public:
  CandidateSet(const DomainParts& parts, std::string source)
      : parts_(parts), source_(std::move(source)) {}

  void Add(const std::string& label) {
    if (!IsValidLabel(label)) return;
    std::string name = parts_.With(label);
    if (name == source_ || !seen_.insert(name).second) return;
    pairs_.push_back({std::move(name), source_});
  }

  std::vector<TypoPair> Take() { return std::move(pairs_); }

 private:
  const DomainParts& parts_;
  std::string source_;
  std::unordered_set<std::string> seen_;
  std::vector<TypoPair> pairs_;
};

}  // namespace

FuzzRules FuzzRules::All() {
  FuzzRules rules;
  rules.bits_.set();
  return rules;
}

FuzzRules& FuzzRules::Enable(FuzzRule rule) {
  bits_.set(static_cast<std::size_t>(rule));
  return *this;
}

FuzzRules FuzzRules::Parse(std::string_view list) {
  if (Trim(list) == "all") return All();
  FuzzRules rules;
  for (std::string_view name : SplitView(list, ',')) {
    name = Trim(name);
    if (name.empty()) continue;
    const auto it = std::find(kRuleNames.begin(), kRuleNames.end(), name);
    if (it == kRuleNames.end()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "unknown fuzz rule '" + std::string(name) + "'");
    }
    rules.Enable(static_cast<FuzzRule>(it - kRuleNames.begin()));
  }
  return rules;
}

std::string FuzzRules::ToString() const {
  std::string out;
  for (std::size_t i = 0; i < kRuleNames.size(); ++i) {
    if (!bits_.test(i)) continue;
    if (!out.empty()) out += ',';
    out += kRuleNames[i];
  }
  return out;
}

std::vector<TypoPair> FuzzDomain(const DomainRecord& record,
                                 const FuzzRules& rules) {
  const DomainParts parts = SplitDomain(record.name);
  const std::string& label = parts.label;
  const std::size_t n = label.size();
  CandidateSet out(parts, record.name);

  if (rules.enabled(FuzzRule::kOmission)) {
    for (std::size_t i = 0; i < n; ++i) {
      std::string s = label;
      s.erase(i, 1);
      out.Add(s);
    }
  }
  if (rules.enabled(FuzzRule::kInsertion)) {
    for (std::size_t i = 0; i <= n; ++i) {
      for (char c : kLabelAlphabet) {
        const bool near_prev = i > 0 && Near(c, label[i - 1]);
        const bool near_next = i < n && Near(c, label[i]);
        if (!near_prev && !near_next) continue;
        std::string s = label;
        s.insert(s.begin() + static_cast<std::ptrdiff_t>(i), c);
        out.Add(s);
      }
    }
  }
  if (rules.enabled(FuzzRule::kReplacement)) {
    for (std::size_t i = 0; i < n; ++i) {
      for (char c : kLabelAlphabet) {
        if (c == label[i] || !Near(c, label[i])) continue;
        std::string s = label;
        s[i] = c;
        out.Add(s);
      }
    }
  }
  if (rules.enabled(FuzzRule::kTransposition)) {
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (label[i] == label[i + 1]) continue;
      std::string s = label;
      std::swap(s[i], s[i + 1]);
      out.Add(s);
    }
  }
  if (rules.enabled(FuzzRule::kRepetition)) {
    for (std::size_t i = 0; i < n; ++i) {
      std::string s = label;
      s.insert(s.begin() + static_cast<std::ptrdiff_t>(i), label[i]);
      out.Add(s);
    }
  }
  if (rules.enabled(FuzzRule::kVowelSwap)) {
    for (std::size_t i = 0; i < n; ++i) {
      if (kVowels.find(label[i]) == std::string_view::npos) continue;
      for (char v : kVowels) {
        if (v == label[i]) continue;
        std::string s = label;
        s[i] = v;
        out.Add(s);
      }
    }
  }
  if (rules.enabled(FuzzRule::kHomoglyph)) {
    for (std::size_t i = 0; i < n; ++i) {
      for (const auto& [a, b] : kHomoglyphs) {
        char to = '\0';
        if (label[i] == a) to = b;
        if (label[i] == b) to = a;
        if (to == '\0') continue;
        std::string s = label;
        s[i] = to;
        out.Add(s);
      }
    }
  }
  return out.Take();
}

std::size_t GenerateTrainingPairs(std::span<const DomainRecord> records,
                                  const FuzzRules& rules, std::ostream& out) {
  if (records.empty()) {
    throw Error(ErrorCode::kEmptyDataset, "no records to fuzz");
  }
  std::size_t count = 0;
  for (const DomainRecord& r : records) {
    for (const TypoPair& p : FuzzDomain(r, rules)) {
      out << p.typo_domain << '\t' << p.source_domain << '\n';
      ++count;
    }
  }
  if (!out) throw Error(ErrorCode::kIoError, "failed writing pairs");
  return count;
}

std::vector<TypoPair> ParsePairs(std::string_view text) {
  std::vector<TypoPair> pairs;
  std::size_t line_no = 0;
  for (std::string_view line : SplitView(text, '\n')) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    const auto cells = SplitView(line, '\t');
    if (cells.size() != 2 || cells[0].empty() || cells[1].empty()) {
      throw Error(ErrorCode::kFormatError,
                  "pairs line " + std::to_string(line_no) +
                      " is not \"typo<TAB>source\"");
    }
    pairs.push_back({std::string(cells[0]), std::string(cells[1])});
  }
  return pairs;
}

std::vector<TypoPair> ReadPairs(const std::filesystem::path& path) {
  return ParsePairs(ReadFileBytes(path));
}

// ---------------------------------------------------------------------------
// Keyboard-labelled test set.

std::string_view TestLabelName(TestLabel label) {
  return label == TestLabel::kTypo ? "typo" : "benign";
}

std::string_view EditActionName(EditAction action) {
  switch (action) {
    case EditAction::kDeletion: return "deletion";
    case EditAction::kInsertion: return "insertion";
    case EditAction::kSubstitution: return "substitution";
  }
  return "?";
}

std::string LabeledTestCase::Detail() const {
  std::string s = "pos=" + std::to_string(position);
  if (from != '\0') s += std::string(";from=") + from;
  if (to != '\0') s += std::string(";to=") + to;
  if (kb_distance) s += ";kb=" + std::to_string(*kb_distance);
  return s;
}

namespace {

// nullopt means "drop".
std::optional<TestLabel> LabelFor(const std::vector<int>& distances,
                                  const TestSetOptions& options) {
  const auto [lo, hi] = std::minmax_element(distances.begin(), distances.end());
  if (options.adjacency == InsertionAdjacency::kMin) {
    if (*lo == options.typo_distance) return TestLabel::kTypo;
    if (*lo > options.benign_above) return TestLabel::kBenign;
    return std::nullopt;
  }
  if (*lo == options.typo_distance && *hi == options.typo_distance) {
    return TestLabel::kTypo;
  }
  if (*lo > options.benign_above) return TestLabel::kBenign;
  return std::nullopt;
}

}  // namespace

std::vector<LabeledTestCase> GenerateTestSet(
    std::span<const DomainRecord> records, const TestSetOptions& options) {
  std::unordered_set<std::string> sources;
  for (const auto& r : records) sources.insert(r.name);

  auto ambiguous = [&](const std::string& candidate, const std::string& own) {
    for (const auto& r : records) {
      if (r.name == own) continue;
      const auto len_gap = candidate.size() > r.name.size()
                               ? candidate.size() - r.name.size()
                               : r.name.size() - candidate.size();
      if (len_gap > static_cast<std::size_t>(options.ambiguity_radius)) continue;
      if (OsaDistance(candidate, r.name) <= options.ambiguity_radius) return true;
    }
    return false;
  };

  std::vector<LabeledTestCase> cases;
  for (const DomainRecord& record : records) {
    const DomainParts parts = SplitDomain(record.name);
    const std::string& label = parts.label;
    const std::size_t n = label.size();
    std::unordered_set<std::string> seen;

    auto emit = [&](const std::string& new_label, LabeledTestCase c) {
      if (!IsValidLabel(new_label)) return;
      c.candidate = parts.With(new_label);
      if (sources.count(c.candidate) || !seen.insert(c.candidate).second) return;
      if (options.ambiguity_radius > 0 && ambiguous(c.candidate, record.name)) {
        return;
      }
      c.source = record.name;
      cases.push_back(std::move(c));
    };

    for (std::size_t i = 0; i < n; ++i) {
      std::string s = label;
      s.erase(i, 1);
      LabeledTestCase c;
      c.label = TestLabel::kTypo;
      c.action = EditAction::kDeletion;
      c.position = static_cast<int>(i);
      c.from = label[i];
      emit(s, std::move(c));
    }
    for (std::size_t i = 0; i <= n; ++i) {
      for (char ch : kLabelAlphabet) {
        std::vector<int> distances;
        if (i > 0) distances.push_back(KeyboardDistance(ch, label[i - 1]));
        if (i < n) distances.push_back(KeyboardDistance(ch, label[i]));
        const auto verdict = LabelFor(distances, options);
        if (!verdict) continue;
        std::string s = label;
        s.insert(s.begin() + static_cast<std::ptrdiff_t>(i), ch);
        LabeledTestCase c;
        c.label = *verdict;
        c.action = EditAction::kInsertion;
        c.position = static_cast<int>(i);
        c.to = ch;
        c.kb_distance = *std::min_element(distances.begin(), distances.end());
        emit(s, std::move(c));
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (char ch : kLabelAlphabet) {
        if (ch == label[i]) continue;
        const int d = KeyboardDistance(ch, label[i]);
        const auto verdict = LabelFor({d}, options);
        if (!verdict) continue;
        std::string s = label;
        s[i] = ch;
        LabeledTestCase c;
        c.label = *verdict;
        c.action = EditAction::kSubstitution;
        c.position = static_cast<int>(i);
        c.from = label[i];
        c.to = ch;
        c.kb_distance = d;
        emit(s, std::move(c));
      }
    }
  }
  return cases;
}

std::string FormatTestSet(std::span<const LabeledTestCase> cases) {
  std::string out = "candidate\tsource\tlabel\taction\tdetail\n";
  for (const auto& c : cases) {
    out += c.candidate;
    out += '\t';
    out += c.source;
    out += '\t';
    out += TestLabelName(c.label);
    out += '\t';
    out += EditActionName(c.action);
    out += '\t';
    out += c.Detail();
    out += '\n';
  }
  return out;
}

namespace {

int ParseDetailInt(std::string_view s, std::size_t line_no) {
  int v = 0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size()) {
    throw Error(ErrorCode::kFormatError,
                "bad number in detail on line " + std::to_string(line_no));
  }
  return v;
}

}  // namespace

std::vector<LabeledTestCase> ParseTestSet(std::string_view text) {
  std::vector<LabeledTestCase> cases;
  std::size_t line_no = 0;
  bool header = true;
  for (std::string_view line : SplitView(text, '\n')) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (header) {
      header = false;
      if (line.rfind("candidate\t", 0) == 0) continue;
    }
    const auto cells = SplitView(line, '\t');
    const auto fail = [&](const std::string& what) {
      throw Error(ErrorCode::kFormatError,
                  "test set line " + std::to_string(line_no) + ": " + what);
    };
    if (cells.size() != 5) fail("expected 5 columns");
    LabeledTestCase c;
    c.candidate = std::string(cells[0]);
    c.source = std::string(cells[1]);
    if (cells[2] == "typo") {
      c.label = TestLabel::kTypo;
    } else if (cells[2] == "benign") {
      c.label = TestLabel::kBenign;
    } else {
      fail("bad label");
    }
    if (cells[3] == "deletion") {
      c.action = EditAction::kDeletion;
    } else if (cells[3] == "insertion") {
      c.action = EditAction::kInsertion;
    } else if (cells[3] == "substitution") {
      c.action = EditAction::kSubstitution;
    } else {
      fail("bad action");
    }
    for (std::string_view kv : SplitView(cells[4], ';')) {
      const auto eq = kv.find('=');
      if (eq == std::string_view::npos) fail("bad detail");
      const std::string_view key = kv.substr(0, eq);
      const std::string_view value = kv.substr(eq + 1);
      if (key == "pos") {
        c.position = ParseDetailInt(value, line_no);
      } else if (key == "from" && value.size() == 1) {
        c.from = value[0];
      } else if (key == "to" && value.size() == 1) {
        c.to = value[0];
      } else if (key == "kb") {
        c.kb_distance = ParseDetailInt(value, line_no);
      } else {
        fail("bad detail key");
      }
    }
    cases.push_back(std::move(c));
  }
  return cases;
}

std::vector<LabeledTestCase> ReadTestSet(const std::filesystem::path& path) {
  return ParseTestSet(ReadFileBytes(path));
}

}  // namespace typotrace
