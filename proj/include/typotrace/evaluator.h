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

#ifndef TYPOTRACE_EVALUATOR_H_
#define TYPOTRACE_EVALUATOR_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "typotrace/dataset.h"
#include "typotrace/detector.h"
#include "typotrace/encoder.h"

namespace typotrace {

// Unweighted mean of the per-class F1 scores (positive = typo). A class
// absent from both predictions and labels scores 0.
// Throws kLengthMismatch or kEmpty.
double MacroF1(const std::vector<bool>& predictions,
               const std::vector<bool>& labels);

// What a detector (model or baseline) said about one test case.
struct CaseOutcome {
  bool flagged = false;
  std::string match;
  double score = 0.0;  // lower = more suspicious
};

// Fraction of cases labelled typo and flagged whose match is the case's
// source; nullopt when no case qualifies. Throws kMisalignment.
std::optional<double> DomainClassificationAccuracy(
    std::span<const CaseOutcome> outcomes,
    std::span<const LabeledTestCase> cases);
std::optional<double> DomainClassificationAccuracy(
    std::span<const DetectionResult> results,
    std::span<const LabeledTestCase> cases);

enum class ScoreDirection { kLowerIsPositive, kHigherIsPositive };

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;
  // Cases scoring at or beyond this value are predicted positive. The
  // leading (0, 0) point carries an infinite threshold.
  double threshold = 0.0;
};

struct RocCurve {
  std::vector<RocPoint> points;  // from (0, 0) to (1, 1)
  double auc = 0.0;              // trapezoid rule
};

// Sweeps every distinct score. Throws kLengthMismatch or kEmpty; a class
// missing from `labels` gives rates of 0 on that axis.
RocCurve ComputeRoc(std::span<const double> scores,
                    const std::vector<bool>& labels, ScoreDirection direction);

struct MetricsReport {
  std::string method;  // "model" or "baseline"
  double macro_f1 = 0.0;
  std::optional<double> classification_accuracy;
  double auc = 0.0;
  std::size_t n = 0;
  double prevalence = 0.0;
  double threshold = 0.0;
  std::string dataset_digest;
  std::map<std::string, std::string> config;
  RocCurve roc;

  std::string ToJson() const;
  // "fpr,tpr,threshold" header and one row per point.
  std::string RocCsv() const;
};

MetricsReport EvaluateOutcomes(std::string method,
                               std::span<const CaseOutcome> outcomes,
                               std::span<const LabeledTestCase> cases,
                               double threshold);

MetricsReport EvaluateModel(const Detector& detector,
                            std::span<const LabeledTestCase> cases,
                            int threads = 1);

MetricsReport EvaluateBaseline(std::span<const std::string> checking_list,
                               std::span<const LabeledTestCase> cases,
                               int threshold = 1);

// Writes metrics.json and roc.csv into `out_dir`.
void WriteReport(const MetricsReport& report,
                 const std::filesystem::path& out_dir);

// "domain<TAB>v0<TAB>...<TAB>v255" per domain, canonical renders.
std::size_t ExportEmbeddings(std::span<const std::string> domains,
                             const EncoderWeights& weights, std::ostream& out,
                             std::uint64_t render_seed = 0, int threads = 1);

}  // namespace typotrace

#endif  // TYPOTRACE_EVALUATOR_H_
