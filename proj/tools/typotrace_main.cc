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

// Command-line front end for the typotrace pipeline.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "typotrace/dataset.h"
#include "typotrace/detector.h"
#include "typotrace/dld.h"
#include "typotrace/encoder.h"
#include "typotrace/error.h"
#include "typotrace/evaluator.h"
#include "typotrace/renderer.h"
#include "typotrace/trainer.h"
#include "typotrace/util.h"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace typotrace {
namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

constexpr std::size_t kAll = std::numeric_limits<std::size_t>::max();

// Sidecar written next to every artifact as "<artifact>.meta.json".
class Metadata {
 public:
  explicit Metadata(std::string command) {
    doc_["tool"] = "typotrace";
    doc_["version"] = TYPOTRACE_VERSION;
    doc_["command"] = std::move(command);
    doc_["inputs"] = ordered_json::object();
    doc_["parameters"] = ordered_json::object();
  }

  void Seed(std::uint64_t seed) { doc_["seed"] = seed; }
  void Input(const fs::path& path) {
    doc_["inputs"][path.filename().string()] = FileSha256Hex(path);
  }
  template <typename V>
  void Param(const std::string& key, const V& value) {
    doc_["parameters"][key] = value;
  }
  void WriteFor(const fs::path& artifact) const {
    fs::path side = artifact;
    side += ".meta.json";
    AtomicWriteFile(side, doc_.dump(2) + "\n");
  }

 private:
  ordered_json doc_;
};

std::vector<std::string> LoadChecklist(const fs::path& path, std::size_t top) {
  std::size_t skipped = 0;
  auto records = IngestDomainList(path, top, &skipped);
  if (skipped > 0) {
    std::cerr << "warning: skipped " << skipped << " invalid domain(s) in "
              << path << "\n";
  }
  return DomainNames(records);
}

ordered_json ResultJson(const DetectionResult& r) {
  ordered_json j;
  j["query"] = r.query;
  j["flagged"] = r.flagged;
  j["match"] = r.match;
  j["distance"] = r.distance;
  ordered_json ups = ordered_json::array();
  for (const auto& n : r.runner_ups) {
    ups.push_back({{"domain", n.domain}, {"distance", n.distance}});
  }
  j["runner_ups"] = ups;
  return j;
}

std::string FormatNumber(double v) {
  std::ostringstream ss;
  ss.precision(6);
  ss << v;
  return ss.str();
}

}  // namespace

int Run(int argc, char** argv) {
  CLI::App app{"Typo-squatting detection from keyboard-trace images"};
  app.require_subcommand(1);
  int threads = 1;
  app.add_option("--threads", threads, "Worker threads (1 = reproducible mode)")
      ->check(CLI::PositiveNumber);

  // render
  auto* render = app.add_subcommand("render", "Render a domain to a PNG");
  std::string render_domain;
  fs::path render_out;
  std::uint64_t render_seed = 0;
  render->add_option("--domain", render_domain)->required();
  render->add_option("--out", render_out)->required();
  render->add_option("--seed", render_seed);

  // gen-train
  auto* gen_train = app.add_subcommand("gen-train", "Generate fuzzed training pairs");
  fs::path gt_domains, gt_out;
  std::size_t gt_top = 20000;
  std::string gt_rules = "all";
  std::uint64_t gt_seed = 0;
  gen_train->add_option("--domains", gt_domains)->required()->check(CLI::ExistingFile);
  gen_train->add_option("--top", gt_top);
  gen_train->add_option("--rules", gt_rules, "Comma-separated rules or 'all'");
  gen_train->add_option("--seed", gt_seed);
  gen_train->add_option("--out", gt_out)->required();

  // gen-test
  auto* gen_test = app.add_subcommand("gen-test", "Generate the keyboard-labelled test set");
  fs::path te_domains, te_out;
  std::size_t te_top = 100;
  std::string te_adjacency = "min";
  gen_test->add_option("--domains", te_domains)->required()->check(CLI::ExistingFile);
  gen_test->add_option("--top", te_top);
  gen_test->add_option("--adjacency", te_adjacency, "Insertion rule: min | both")
      ->check(CLI::IsMember({"min", "both"}));
  gen_test->add_option("--out", te_out)->required();

  // train
  auto* train = app.add_subcommand("train", "Train the encoder");
  fs::path tr_pairs, tr_checklist, tr_out;
  std::size_t tr_top = kAll;
  std::string tr_loss = "nl";
  std::string tr_positive = "bank";
  TrainConfig tr_config;
  bool tr_verbatim = false;
  train->add_option("--pairs", tr_pairs)->required()->check(CLI::ExistingFile);
  train->add_option("--checklist", tr_checklist)->required()->check(CLI::ExistingFile);
  train->add_option("--top", tr_top, "Use the first N checklist entries");
  train->add_option("--loss", tr_loss)->check(CLI::IsMember({"tl", "nl"}));
  train->add_option("--positive", tr_positive,
                    "Positive target: bank row (constant) or live render")
      ->check(CLI::IsMember({"bank", "live"}));
  train->add_option("--batch", tr_config.batch_size);
  train->add_option("--epochs", tr_config.epochs);
  train->add_option("--refresh", tr_config.refresh_interval);
  train->add_option("--margin", tr_config.loss.margin);
  train->add_option("--tau", tr_config.loss.temperature);
  train->add_option("--bn", tr_config.loss.negatives);
  train->add_option("--lr", tr_config.optimizer.learning_rate);
  train->add_option("--seed", tr_config.seed);
  train->add_flag("--negatives-only-denominator", tr_verbatim,
                  "NT-Xent denominator sums negatives only");
  train->add_option("--out", tr_out)->required();

  // index
  auto* index = app.add_subcommand("index", "Embed the checking list");
  fs::path ix_model, ix_checklist, ix_out;
  std::size_t ix_top = kAll;
  double ix_threshold = kDefaultThreshold;
  index->add_option("--model", ix_model)->required()->check(CLI::ExistingFile);
  index->add_option("--checklist", ix_checklist)->required()->check(CLI::ExistingFile);
  index->add_option("--top", ix_top);
  index->add_option("--threshold", ix_threshold);
  index->add_option("--out", ix_out)->required();

  // query
  auto* query = app.add_subcommand("query", "Check domains against the index");
  fs::path q_model, q_index;
  std::string q_domain;
  bool q_stdin = false, q_json = false;
  query->add_option("--model", q_model)->required()->check(CLI::ExistingFile);
  query->add_option("--index", q_index)->required()->check(CLI::ExistingFile);
  auto* q_domain_opt = query->add_option("--domain", q_domain);
  auto* q_stdin_opt = query->add_flag("--stdin", q_stdin, "Read one domain per line");
  q_domain_opt->excludes(q_stdin_opt);
  query->add_flag("--json", q_json, "Emit JSON lines");

  // eval
  auto* eval = app.add_subcommand("eval", "Evaluate the model on a test set");
  fs::path ev_model, ev_index, ev_testset, ev_out;
  eval->add_option("--model", ev_model)->required()->check(CLI::ExistingFile);
  eval->add_option("--index", ev_index)->required()->check(CLI::ExistingFile);
  eval->add_option("--testset", ev_testset)->required()->check(CLI::ExistingFile);
  eval->add_option("--out-dir", ev_out)->required();

  // baseline
  auto* baseline = app.add_subcommand("baseline", "Evaluate the edit-distance baseline");
  fs::path bl_checklist, bl_testset, bl_out;
  std::size_t bl_top = kAll;
  int bl_max_distance = 1;
  baseline->add_option("--checklist", bl_checklist)->required()->check(CLI::ExistingFile);
  baseline->add_option("--top", bl_top);
  baseline->add_option("--testset", bl_testset)->required()->check(CLI::ExistingFile);
  baseline->add_option("--max-distance", bl_max_distance);
  baseline->add_option("--out-dir", bl_out)->required();

  // export-embeddings
  auto* exporter = app.add_subcommand("export-embeddings", "Dump embeddings as TSV");
  fs::path ex_model, ex_domains, ex_out;
  std::size_t ex_top = kAll;
  exporter->add_option("--model", ex_model)->required()->check(CLI::ExistingFile);
  exporter->add_option("--domains", ex_domains)->required()->check(CLI::ExistingFile);
  exporter->add_option("--top", ex_top);
  exporter->add_option("--out", ex_out)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }
  if (query->parsed() && q_domain.empty() && !q_stdin) {
    std::cerr << "error: query needs --domain or --stdin\n\n" << query->help();
    return kExitUsage;
  }

  try {
    if (render->parsed()) {
      ExportPng(RenderCanonical(render_domain, RenderConfig{}, render_seed), render_out);
      Metadata meta("render");
      meta.Seed(render_seed);
      meta.Param("domain", NormalizeDomain(render_domain));
      meta.WriteFor(render_out);
    } else if (gen_train->parsed()) {
      const auto records = IngestDomainList(gt_domains, gt_top);
      const FuzzRules rules = FuzzRules::Parse(gt_rules);
      std::ostringstream out;
      const std::size_t n = GenerateTrainingPairs(records, rules, out);
      AtomicWriteFile(gt_out, out.str());
      Metadata meta("gen-train");
      meta.Seed(gt_seed);
      meta.Input(gt_domains);
      meta.Param("top", records.size());
      meta.Param("rules", rules.ToString());
      meta.Param("pairs", n);
      meta.WriteFor(gt_out);
      std::cerr << "wrote " << n << " pairs to " << gt_out << "\n";
    } else if (gen_test->parsed()) {
      const auto records = IngestDomainList(te_domains, te_top);
      TestSetOptions options;
      options.adjacency =
          te_adjacency == "both" ? InsertionAdjacency::kBoth : InsertionAdjacency::kMin;
      const auto cases = GenerateTestSet(records, options);
      AtomicWriteFile(te_out, FormatTestSet(cases));
      std::size_t typo = 0;
      for (const auto& c : cases) typo += c.label == TestLabel::kTypo;
      Metadata meta("gen-test");
      meta.Input(te_domains);
      meta.Param("top", records.size());
      meta.Param("adjacency", te_adjacency);
      meta.Param("cases", cases.size());
      meta.Param("typo", typo);
      meta.WriteFor(te_out);
      std::cerr << "wrote " << cases.size() << " cases (" << typo << " typo) to "
                << te_out << "\n";
    } else if (train->parsed()) {
      const auto pairs = ReadPairs(tr_pairs);
      const auto checklist = LoadChecklist(tr_checklist, tr_top);
      tr_config.loss_kind = tr_loss == "tl" ? LossKind::kTriplet : LossKind::kNtXent;
      tr_config.positive_source =
          tr_positive == "live" ? PositiveSource::kLive : PositiveSource::kBank;
      tr_config.loss.denominator_includes_positive = !tr_verbatim;
      tr_config.threads = threads;
      const auto result = Train(pairs, checklist, tr_config, std::nullopt,
                                [](const StepResult& r) {
                                  if (r.step % 20 == 0) {
                                    std::cerr << "step " << r.step << " loss "
                                              << FormatNumber(r.loss) << "\n";
                                  }
                                });
      SaveWeights(result.weights, tr_out);
      fs::path report_path = tr_out;
      report_path += ".report.txt";
      AtomicWriteFile(report_path, result.report.ToKeyValue());
      Metadata meta("train");
      meta.Seed(tr_config.seed);
      meta.Input(tr_pairs);
      meta.Input(tr_checklist);
      meta.Param("loss", tr_loss);
      meta.Param("positive", tr_positive);
      meta.Param("steps", result.report.steps);
      meta.Param("fingerprint", WeightsFingerprint(result.weights));
      meta.WriteFor(tr_out);
      meta.WriteFor(report_path);
    } else if (index->parsed()) {
      const auto weights = LoadWeights(ix_model);
      const auto checklist = LoadChecklist(ix_checklist, ix_top);
      const auto built = BuildIndex(checklist, weights, ix_threshold, 0, threads);
      SaveIndex(built, ix_out);
      Metadata meta("index");
      meta.Input(ix_model);
      meta.Input(ix_checklist);
      meta.Param("threshold", ix_threshold);
      meta.Param("count", built.size());
      meta.WriteFor(ix_out);
    } else if (query->parsed()) {
      const Detector detector(LoadWeights(q_model), LoadIndex(q_index));
      std::vector<std::string> domains;
      if (q_stdin) {
        for (std::string line; std::getline(std::cin, line);) {
          while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
          if (!line.empty()) domains.push_back(line);
        }
      } else {
        domains.push_back(q_domain);
      }
      int status = kExitOk;
      for (const auto& d : domains) {
        try {
          const DetectionResult r = detector.Query(d);
          if (q_json) {
            std::cout << ResultJson(r).dump() << "\n";
          } else {
            std::cout << r.query << '\t' << (r.flagged ? "flagged" : "clear") << '\t'
                      << r.match << '\t' << FormatNumber(r.distance) << "\n";
          }
        } catch (const Error& e) {
          status = kExitData;
          if (q_json) {
            std::cout << ordered_json{{"query", d}, {"error", e.what()}}.dump() << "\n";
          } else {
            std::cerr << "error: " << e.what() << "\n";
          }
        }
      }
      return status;
    } else if (eval->parsed()) {
      const Detector detector(LoadWeights(ev_model), LoadIndex(ev_index));
      const auto cases = ReadTestSet(ev_testset);
      const MetricsReport report = EvaluateModel(detector, cases, threads);
      WriteReport(report, ev_out);
      Metadata meta("eval");
      meta.Input(ev_model);
      meta.Input(ev_index);
      meta.Input(ev_testset);
      meta.WriteFor(ev_out / "metrics.json");
      meta.WriteFor(ev_out / "roc.csv");
      std::cout << report.ToJson();
    } else if (baseline->parsed()) {
      const auto checklist = LoadChecklist(bl_checklist, bl_top);
      const auto cases = ReadTestSet(bl_testset);
      const MetricsReport report = EvaluateBaseline(checklist, cases, bl_max_distance);
      WriteReport(report, bl_out);
      Metadata meta("baseline");
      meta.Input(bl_checklist);
      meta.Input(bl_testset);
      meta.Param("max_distance", bl_max_distance);
      meta.WriteFor(bl_out / "metrics.json");
      meta.WriteFor(bl_out / "roc.csv");
      std::cout << report.ToJson();
    } else if (exporter->parsed()) {
      const auto weights = LoadWeights(ex_model);
      const auto domains = LoadChecklist(ex_domains, ex_top);
      std::ostringstream out;
      const std::size_t n = ExportEmbeddings(domains, weights, out, 0, threads);
      AtomicWriteFile(ex_out, out.str());
      Metadata meta("export-embeddings");
      meta.Input(ex_model);
      meta.Input(ex_domains);
      meta.Param("rows", n);
      meta.WriteFor(ex_out);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitOk;
}

}  // namespace typotrace

int main(int argc, char** argv) { return typotrace::Run(argc, argv); }
