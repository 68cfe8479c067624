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

#include "typotrace/evaluator.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>

#include "json.hpp"
#include "typotrace/dld.h"
#include "typotrace/error.h"
#include "typotrace/util.h"

namespace typotrace {

namespace {

double F1(std::size_t tp, std::size_t fp, std::size_t fn) {
  const std::size_t denom = 2 * tp + fp + fn;
  return denom == 0 ? 0.0 : 2.0 * static_cast<double>(tp) / static_cast<double>(denom);
}

std::string Shortest(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, r.ptr);
}

}  // namespace

double MacroF1(const std::vector<bool>& predictions,
               const std::vector<bool>& labels) {
  if (predictions.size() != labels.size()) {
    throw Error(ErrorCode::kLengthMismatch, "predictions and labels differ in length");
  }
  if (predictions.empty()) throw Error(ErrorCode::kEmpty, "no predictions");
  std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (predictions[i] && labels[i]) ++tp;
    else if (predictions[i] && !labels[i]) ++fp;
    else if (!predictions[i] && labels[i]) ++fn;
    else ++tn;
  }
  // The negative class swaps the roles of fp and fn.
  return 0.5 * (F1(tp, fp, fn) + F1(tn, fn, fp));
}

std::optional<double> DomainClassificationAccuracy(
    std::span<const CaseOutcome> outcomes,
    std::span<const LabeledTestCase> cases) {
  if (outcomes.size() != cases.size()) {
    throw Error(ErrorCode::kMisalignment, "outcomes and cases differ in length");
  }
  std::size_t considered = 0, correct = 0;
  for (std::size_t i = 0; i < cases.size(); ++i) {
    if (cases[i].label != TestLabel::kTypo || !outcomes[i].flagged) continue;
    ++considered;
    if (outcomes[i].match == cases[i].source) ++correct;
  }
  if (considered == 0) return std::nullopt;
  return static_cast<double>(correct) / static_cast<double>(considered);
}

std::optional<double> DomainClassificationAccuracy(
    std::span<const DetectionResult> results,
    std::span<const LabeledTestCase> cases) {
  if (results.size() != cases.size()) {
    throw Error(ErrorCode::kMisalignment, "results and cases differ in length");
  }
  std::vector<CaseOutcome> outcomes;
  outcomes.reserve(results.size());
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (results[i].query != cases[i].candidate) {
      throw Error(ErrorCode::kMisalignment,
                  "result " + std::to_string(i) + " is for '" + results[i].query +
                      "' but case is '" + cases[i].candidate + "'",
                  i);
    }
    outcomes.push_back({results[i].flagged, results[i].match, results[i].distance});
  }
  return DomainClassificationAccuracy(outcomes, cases);
}

RocCurve ComputeRoc(std::span<const double> scores,
                    const std::vector<bool>& labels, ScoreDirection direction) {
  if (scores.size() != labels.size()) {
    throw Error(ErrorCode::kLengthMismatch, "scores and labels differ in length");
  }
  if (scores.empty()) throw Error(ErrorCode::kEmpty, "no scores");
  for (double s : scores) {
    if (!std::isfinite(s)) throw Error(ErrorCode::kInvalidArgument, "non-finite score");
  }
  const bool lower = direction == ScoreDirection::kLowerIsPositive;
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return lower ? scores[a] < scores[b] : scores[a] > scores[b];
  });
  const auto positives = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), true));
  const std::size_t negatives = labels.size() - positives;
  auto rate = [](std::size_t k, std::size_t total) {
    return total == 0 ? 0.0 : static_cast<double>(k) / static_cast<double>(total);
  };

  RocCurve curve;
  const double inf = std::numeric_limits<double>::infinity();
  curve.points.push_back({0.0, 0.0, lower ? -inf : inf});
  std::size_t tp = 0, fp = 0;
  for (std::size_t i = 0; i < order.size();) {
    const double value = scores[order[i]];
    while (i < order.size() && scores[order[i]] == value) {
      if (labels[order[i]]) ++tp; else ++fp;
      ++i;
    }
    curve.points.push_back({rate(fp, negatives), rate(tp, positives), value});
  }
  if (curve.points.back().fpr != 1.0 || curve.points.back().tpr != 1.0) {
    // Only reachable when a class is absent.
    curve.points.push_back({1.0, 1.0, lower ? inf : -inf});
  }
  for (std::size_t i = 1; i < curve.points.size(); ++i) {
    const RocPoint& a = curve.points[i - 1];
    const RocPoint& b = curve.points[i];
    curve.auc += (b.fpr - a.fpr) * (a.tpr + b.tpr) * 0.5;
  }
  return curve;
}

std::string MetricsReport::ToJson() const {
  nlohmann::ordered_json j;
  j["method"] = method;
  j["n"] = n;
  j["prevalence"] = prevalence;
  j["threshold"] = threshold;
  j["macro_f1"] = macro_f1;
  if (classification_accuracy) {
    j["classification_accuracy"] = *classification_accuracy;
  } else {
    j["classification_accuracy"] = nullptr;
  }
  j["auc"] = auc;
  j["roc_points"] = roc.points.size();
  j["dataset_digest"] = dataset_digest;
  nlohmann::ordered_json cfg = nlohmann::ordered_json::object();
  for (const auto& [k, v] : config) cfg[k] = v;
  j["config"] = cfg;
  return j.dump(2) + "\n";
}

std::string MetricsReport::RocCsv() const {
  std::string out = "fpr,tpr,threshold\n";
  for (const RocPoint& p : roc.points) {
    out += Shortest(p.fpr) + "," + Shortest(p.tpr) + "," + Shortest(p.threshold) + "\n";
  }
  return out;
}

MetricsReport EvaluateOutcomes(std::string method,
                               std::span<const CaseOutcome> outcomes,
                               std::span<const LabeledTestCase> cases,
                               double threshold) {
  if (outcomes.size() != cases.size()) {
    throw Error(ErrorCode::kMisalignment, "outcomes and cases differ in length");
  }
  if (cases.empty()) throw Error(ErrorCode::kEmpty, "empty test set");
  std::vector<bool> predictions, labels;
  std::vector<double> scores;
  for (std::size_t i = 0; i < cases.size(); ++i) {
    predictions.push_back(outcomes[i].flagged);
    labels.push_back(cases[i].label == TestLabel::kTypo);
    scores.push_back(outcomes[i].score);
  }
  MetricsReport report;
  report.method = std::move(method);
  report.n = cases.size();
  report.prevalence =
      static_cast<double>(std::count(labels.begin(), labels.end(), true)) /
      static_cast<double>(cases.size());
  report.threshold = threshold;
  report.macro_f1 = MacroF1(predictions, labels);
  report.classification_accuracy = DomainClassificationAccuracy(outcomes, cases);
  report.roc = ComputeRoc(scores, labels, ScoreDirection::kLowerIsPositive);
  report.auc = report.roc.auc;
  report.dataset_digest = Sha256Hex(FormatTestSet(cases));
  return report;
}

MetricsReport EvaluateModel(const Detector& detector,
                            std::span<const LabeledTestCase> cases,
                            int threads) {
  std::vector<std::string> queries;
  queries.reserve(cases.size());
  for (const auto& c : cases) queries.push_back(c.candidate);
  const auto results = detector.QueryBatch(queries, threads);
  std::vector<CaseOutcome> outcomes;
  outcomes.reserve(results.size());
  for (const auto& r : results) outcomes.push_back({r.flagged, r.match, r.distance});
  MetricsReport report =
      EvaluateOutcomes("model", outcomes, cases, detector.index().threshold);
  report.config["model_fingerprint"] = detector.index().model_fingerprint;
  report.config["checking_list_size"] = std::to_string(detector.index().size());
  report.config["render_seed"] = std::to_string(detector.index().render_seed);
  report.config["score"] = "min_euclidean_distance";
  return report;
}

MetricsReport EvaluateBaseline(std::span<const std::string> checking_list,
                               std::span<const LabeledTestCase> cases,
                               int threshold) {
  std::vector<CaseOutcome> outcomes;
  outcomes.reserve(cases.size());
  for (const auto& c : cases) {
    const BaselineResult r = BaselineClassify(c.candidate, checking_list, threshold);
    outcomes.push_back({r.flagged, r.match, static_cast<double>(r.distance)});
  }
  MetricsReport report = EvaluateOutcomes("baseline", outcomes, cases, threshold);
  report.config["checking_list_size"] = std::to_string(checking_list.size());
  report.config["distance"] = "osa_damerau_levenshtein";
  report.config["score"] = "min_edit_distance";
  return report;
}

void WriteReport(const MetricsReport& report,
                 const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorCode::kIoError, "cannot create " + out_dir.string());
  AtomicWriteFile(out_dir / "metrics.json", report.ToJson());
  AtomicWriteFile(out_dir / "roc.csv", report.RocCsv());
}

std::size_t ExportEmbeddings(std::span<const std::string> domains,
                             const EncoderWeights& weights, std::ostream& out,
                             std::uint64_t render_seed, int threads) {
  const auto images = RenderBatch(domains, RenderConfig{}, render_seed);
  const auto embeddings = ForwardBatch(images, weights, threads);
  for (std::size_t i = 0; i < domains.size(); ++i) {
    out << NormalizeDomain(domains[i]);
    for (float v : embeddings[i]) {
      char buf[32];
      const auto r = std::to_chars(buf, buf + sizeof(buf), v);
      out << '\t' << std::string_view(buf, static_cast<std::size_t>(r.ptr - buf));
    }
    out << '\n';
  }
  if (!out) throw Error(ErrorCode::kIoError, "failed writing embeddings");
  return domains.size();
}

}  // namespace typotrace
