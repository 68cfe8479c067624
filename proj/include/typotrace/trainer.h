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

#ifndef TYPOTRACE_TRAINER_H_
#define TYPOTRACE_TRAINER_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "typotrace/encoder.h"
#include "typotrace/losses.h"
#include "typotrace/renderer.h"
#include "typotrace/util.h"

namespace typotrace {

struct TypoPair {
  std::string typo_domain;
  std::string source_domain;  // the label; must be in the checking list

  friend bool operator==(const TypoPair&, const TypoPair&) = default;
};

// Snapshot of checking-list embeddings used for hard-negative mining.
struct ReferenceBank {
  std::vector<std::string> domains;
  std::vector<float> vectors;  // domains.size() x dim, row-major
  int dim = 0;
  std::int64_t refreshed_at_step = 0;

  std::size_t size() const { return domains.size(); }
  std::span<const float> row(std::size_t i) const {
    return std::span<const float>(vectors).subspan(i * dim, dim);
  }
};

// Embeds the canonical render of every domain, in input order.
ReferenceBank RefreshReferenceBank(std::span<const std::string> domains,
                                   const EncoderWeights& weights,
                                   const RenderConfig& render,
                                   std::uint64_t render_seed, int threads = 1);

// The k bank rows nearest (Euclidean) to `anchor`, excluding label_index,
// sorted by distance with ties going to the lower index. Throws
// kBankTooSmall unless 1 <= k <= bank.size() - 1.
std::vector<std::size_t> MineHardNegatives(std::span<const float> anchor,
                                           const ReferenceBank& bank,
                                           std::size_t label_index,
                                           std::size_t k);

enum class LossKind { kTriplet, kNtXent };

// Where the positive embedding comes from. kBank uses the label's row of the
// reference bank as a constant target; kLive re-embeds a fresh render of the
// source and backpropagates through it.
enum class PositiveSource { kBank, kLive };

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

struct TrainConfig {
  LossKind loss_kind = LossKind::kNtXent;
  PositiveSource positive_source = PositiveSource::kBank;
  int batch_size = 64;
  int refresh_interval = 100;
  int epochs = 1;
  AdamConfig optimizer;
  LossConfig loss;
  std::uint64_t seed = 0;
  // Seed for canonical renders of the checking list (bank and index).
  std::uint64_t render_seed = 0;
  RenderConfig render;
  int threads = 1;

  void Validate() const;
};

struct StepResult {
  std::int64_t step = 0;
  double loss = 0.0;
  // Mean anchor-to-nearest-negative distance over the batch.
  double hardest_negative_distance = 0.0;
  bool refreshed = false;
};

class Trainer {
 public:
  Trainer(EncoderWeights initial, std::vector<std::string> checking_list,
          TrainConfig config);

  // One optimizer update on the batch. The bank is refreshed first on steps
  // 1, 1 + refresh_interval, 1 + 2 * refresh_interval, ...
  // Throws kUnknownDomain if a pair's source is not in the checking list and
  // kNonFiniteLoss if the loss diverges.
  StepResult Step(std::span<const TypoPair> batch);

  const EncoderWeights& weights() const { return weights_; }
  const ReferenceBank& bank() const { return bank_; }
  std::int64_t step() const { return step_; }
  int refresh_count() const { return refresh_count_; }

 private:
  std::size_t LabelIndex(const std::string& source) const;
  void ApplyAdam(const EncoderWeights& grads);

  EncoderWeights weights_;
  std::vector<std::string> checking_list_;
  std::unordered_map<std::string, std::size_t> label_of_;
  TrainConfig config_;
  Rng rng_;
  ReferenceBank bank_;
  EncoderWeights adam_m_;
  EncoderWeights adam_v_;
  std::int64_t step_ = 0;
  int refresh_count_ = 0;
};

struct TrainReport {
  std::int64_t steps = 0;
  std::size_t pairs = 0;
  std::vector<double> step_losses;
  // Mean loss over each refresh window.
  std::vector<double> loss_curve;
  std::vector<double> hardest_negative_distance_curve;
  double wall_seconds = 0.0;
  TrainConfig config;

  // Human-readable "key: value" document.
  std::string ToKeyValue() const;
};

struct TrainResult {
  EncoderWeights weights;
  TrainReport report;
};

using TrainProgress = std::function<void(const StepResult&)>;

// Seeded shuffle each epoch, then consecutive batches of batch_size (the last
// batch may be short). Weights start from `initial` or from InitWeights
// seeded by DeriveSeed(config.seed, "init").
TrainResult Train(std::span<const TypoPair> pairs,
                  std::span<const std::string> checking_list,
                  const TrainConfig& config,
                  std::optional<EncoderWeights> initial = std::nullopt,
                  const TrainProgress& progress = nullptr);

}  // namespace typotrace

#endif  // TYPOTRACE_TRAINER_H_
