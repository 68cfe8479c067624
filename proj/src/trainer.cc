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

#include "typotrace/trainer.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "typotrace/error.h"

namespace typotrace {

ReferenceBank RefreshReferenceBank(std::span<const std::string> domains,
                                   const EncoderWeights& weights,
                                   const RenderConfig& render,
                                   std::uint64_t render_seed, int threads) {
  if (domains.empty()) {
    throw Error(ErrorCode::kEmpty, "reference bank needs at least one domain");
  }
  RenderConfig canonical = render;
  canonical.seed_mode = SeedMode::kCanonical;
  std::vector<SwypeImage> images;
  try {
    images = RenderBatch(domains, canonical, render_seed);
  } catch (const Error& e) {
    RethrowWithContext(e, "reference " + domains[e.index().value_or(0)],
                       e.index());
  }
  const auto embeddings = ForwardBatch(images, weights, threads);
  ReferenceBank bank;
  bank.domains.assign(domains.begin(), domains.end());
  bank.dim = weights.config.embedding_dim();
  bank.vectors.reserve(domains.size() * bank.dim);
  for (const auto& e : embeddings) {
    bank.vectors.insert(bank.vectors.end(), e.begin(), e.end());
  }
  return bank;
}

std::vector<std::size_t> MineHardNegatives(std::span<const float> anchor,
                                           const ReferenceBank& bank,
                                           std::size_t label_index,
                                           std::size_t k) {
  if (k < 1 || bank.size() < 2 || k > bank.size() - 1) {
    throw Error(ErrorCode::kBankTooSmall,
                "cannot mine " + std::to_string(k) + " negatives from a bank of " +
                    std::to_string(bank.size()));
  }
  if (label_index >= bank.size()) {
    throw Error(ErrorCode::kInvalidArgument, "label index out of range");
  }
  if (anchor.size() != static_cast<std::size_t>(bank.dim)) {
    throw Error(ErrorCode::kLengthMismatch, "anchor size differs from bank");
  }
  std::vector<std::pair<double, std::size_t>> scored;
  scored.reserve(bank.size() - 1);
  for (std::size_t i = 0; i < bank.size(); ++i) {
    if (i == label_index) continue;
    const auto row = bank.row(i);
    double sq = 0.0;
    for (std::size_t j = 0; j < row.size(); ++j) {
      const double d = static_cast<double>(anchor[j]) - row[j];
      sq += d * d;
    }
    scored.emplace_back(std::sqrt(sq), i);
  }
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(k),
                    scored.end());
  std::vector<std::size_t> out(k);
  for (std::size_t i = 0; i < k; ++i) out[i] = scored[i].second;
  return out;
}

void TrainConfig::Validate() const {
  if (batch_size < 1 || refresh_interval < 1 || epochs < 1 || threads < 1) {
    throw Error(ErrorCode::kInvalidArgument,
                "batch size, refresh interval, epochs and threads must be >= 1");
  }
  if (!(optimizer.learning_rate > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "learning rate must be positive");
  }
  loss.Validate();
  render.Validate();
}

Trainer::Trainer(EncoderWeights initial, std::vector<std::string> checking_list,
                 TrainConfig config)
    : weights_(std::move(initial)),
      checking_list_(std::move(checking_list)),
      config_(std::move(config)),
      rng_(DeriveSeed(config_.seed, "train")) {
  config_.Validate();
  if (checking_list_.size() < static_cast<std::size_t>(config_.loss.negatives) + 1) {
    throw Error(ErrorCode::kBankTooSmall,
                "checking list must hold more entries than negatives per anchor");
  }
  for (std::size_t i = 0; i < checking_list_.size(); ++i) {
    label_of_.emplace(checking_list_[i], i);
  }
  adam_m_ = ZerosLike(weights_);
  adam_v_ = ZerosLike(weights_);
}

std::size_t Trainer::LabelIndex(const std::string& source) const {
  const auto it = label_of_.find(source);
  if (it == label_of_.end()) {
    throw Error(ErrorCode::kUnknownDomain,
                "source '" + source + "' is not in the checking list");
  }
  return it->second;
}

namespace {

// Gradient accumulation happens in fixed-size chunks summed in chunk order, so
// the result is independent of how many threads process the chunks.
constexpr std::size_t kChunk = 8;

struct PairWork {
  SwypeImage anchor;
  SwypeImage positive;
  std::size_t label = 0;
  std::size_t pick = 0;  // triplet negative among the mined ones
  double loss = 0.0;
  double hardest = 0.0;
};

}  // namespace

StepResult Trainer::Step(std::span<const TypoPair> batch) {
  if (batch.empty()) throw Error(ErrorCode::kEmptyDataset, "empty batch");
  StepResult result;
  result.step = ++step_;
  if ((step_ - 1) % config_.refresh_interval == 0) {
    bank_ = RefreshReferenceBank(checking_list_, weights_, config_.render,
                                 config_.render_seed, config_.threads);
    bank_.refreshed_at_step = step_;
    ++refresh_count_;
    result.refreshed = true;
  }

  RenderConfig stream = config_.render;
  stream.seed_mode = SeedMode::kStream;
  const std::size_t k = static_cast<std::size_t>(config_.loss.negatives);
  std::vector<PairWork> work(batch.size());
  for (std::size_t i = 0; i < batch.size(); ++i) {
    work[i].label = LabelIndex(batch[i].source_domain);
    try {
      work[i].anchor = Render(batch[i].typo_domain, stream, rng_);
      if (config_.positive_source == PositiveSource::kLive) {
        work[i].positive = Render(batch[i].source_domain, stream, rng_);
      }
    } catch (const Error& e) {
      RethrowWithContext(e, "pair " + batch[i].typo_domain, i);
    }
    if (config_.loss_kind == LossKind::kTriplet) work[i].pick = rng_.UniformIndex(k);
  }

  const std::size_t chunks = (batch.size() + kChunk - 1) / kChunk;
  std::vector<EncoderWeights> chunk_grads(chunks);
  const double scale = 1.0 / static_cast<double>(batch.size());
  const LossConfig& loss_config = config_.loss;
  const LossKind kind = config_.loss_kind;
  const int dim = weights_.config.embedding_dim();
  const bool live_positive = config_.positive_source == PositiveSource::kLive;

  ParallelFor(chunks, config_.threads, [&](std::size_t c) {
    EncoderWeights& grads = chunk_grads[c];
    grads = ZerosLike(weights_);
    EncoderNet<float> anchor_net(weights_);
    EncoderNet<float> positive_net(weights_);
    std::vector<float> grad_a(dim), grad_p(dim);
    const std::size_t end = std::min(batch.size(), (c + 1) * kChunk);
    for (std::size_t i = c * kChunk; i < end; ++i) {
      PairWork& w = work[i];
      const auto ea = anchor_net.Forward(w.anchor.data());
      const auto negatives = MineHardNegatives(ea, bank_, w.label, k);

      const std::vector<double> a(ea.begin(), ea.end());
      std::vector<double> p;
      if (live_positive) {
        const auto ep = positive_net.Forward(w.positive.data());
        p.assign(ep.begin(), ep.end());
      } else {
        const auto row = bank_.row(w.label);
        p.assign(row.begin(), row.end());
      }
      std::vector<std::vector<double>> negs;
      for (std::size_t n : negatives) {
        const auto row = bank_.row(n);
        negs.emplace_back(row.begin(), row.end());
      }
      {
        double sq = 0.0;
        for (int j = 0; j < dim; ++j) sq += (a[j] - negs[0][j]) * (a[j] - negs[0][j]);
        w.hardest = std::sqrt(sq);
      }
      LossGradients<double> lg;
      if (kind == LossKind::kTriplet) {
        w.loss = TripletLoss<double>(a, p, negs[w.pick], loss_config, &lg);
      } else {
        std::vector<std::span<const double>> views(negs.begin(), negs.end());
        w.loss = NtXentLoss<double>(a, p, views, loss_config, &lg);
      }
      for (int j = 0; j < dim; ++j) {
        grad_a[j] = static_cast<float>(lg.anchor[j] * scale);
        grad_p[j] = static_cast<float>(lg.positive[j] * scale);
      }
      anchor_net.Backward(grad_a, grads);
      if (live_positive) positive_net.Backward(grad_p, grads);
    }
  });

  double loss_sum = 0.0, hardest_sum = 0.0;
  for (const PairWork& w : work) {
    loss_sum += w.loss;
    hardest_sum += w.hardest;
  }
  result.loss = loss_sum / static_cast<double>(batch.size());
  result.hardest_negative_distance = hardest_sum / static_cast<double>(batch.size());
  if (!std::isfinite(result.loss)) {
    throw Error(ErrorCode::kNonFiniteLoss,
                "loss diverged at step " + std::to_string(step_));
  }

  EncoderWeights& total = chunk_grads[0];
  for (std::size_t c = 1; c < chunks; ++c) {
    for (std::size_t t = 0; t < total.tensors.size(); ++t) {
      auto& dst = total.tensors[t];
      const auto& src = chunk_grads[c].tensors[t];
      for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
    }
  }
  ApplyAdam(total);
  return result;
}

void Trainer::ApplyAdam(const EncoderWeights& grads) {
  const AdamConfig& opt = config_.optimizer;
  const double t = static_cast<double>(step_);
  const double c1 = 1.0 - std::pow(opt.beta1, t);
  const double c2 = 1.0 - std::pow(opt.beta2, t);
  for (std::size_t k = 0; k < weights_.tensors.size(); ++k) {
    auto& w = weights_.tensors[k];
    auto& m = adam_m_.tensors[k];
    auto& v = adam_v_.tensors[k];
    const auto& g = grads.tensors[k];
    for (std::size_t i = 0; i < w.size(); ++i) {
      const double gi = g[i];
      const double mi = opt.beta1 * m[i] + (1.0 - opt.beta1) * gi;
      const double vi = opt.beta2 * v[i] + (1.0 - opt.beta2) * gi * gi;
      m[i] = static_cast<float>(mi);
      v[i] = static_cast<float>(vi);
      w[i] = static_cast<float>(
          w[i] - opt.learning_rate * (mi / c1) / (std::sqrt(vi / c2) + opt.epsilon));
    }
  }
}

namespace {

std::string JoinDoubles(const std::vector<double>& values) {
  std::ostringstream ss;
  ss.precision(6);
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) ss << ',';
    ss << values[i];
  }
  return std::move(ss).str();
}

double WindowMean(const std::vector<double>& v, std::size_t begin, std::size_t end) {
  double s = 0.0;
  for (std::size_t i = begin; i < end; ++i) s += v[i];
  return end > begin ? s / static_cast<double>(end - begin) : 0.0;
}

}  // namespace

std::string TrainReport::ToKeyValue() const {
  std::ostringstream ss;
  ss.precision(10);
  ss << "loss_kind: " << (config.loss_kind == LossKind::kTriplet ? "tl" : "nl") << '\n'
     << "positive_source: "
     << (config.positive_source == PositiveSource::kLive ? "live" : "bank") << '\n'
     << "pairs: " << pairs << '\n'
     << "steps: " << steps << '\n'
     << "batch_size: " << config.batch_size << '\n'
     << "epochs: " << config.epochs << '\n'
     << "refresh_interval: " << config.refresh_interval << '\n'
     << "optimizer: adam\n"
     << "learning_rate: " << config.optimizer.learning_rate << '\n'
     << "beta1: " << config.optimizer.beta1 << '\n'
     << "beta2: " << config.optimizer.beta2 << '\n'
     << "epsilon: " << config.optimizer.epsilon << '\n'
     << "margin: " << config.loss.margin << '\n'
     << "temperature: " << config.loss.temperature << '\n'
     << "negatives: " << config.loss.negatives << '\n'
     << "denominator_includes_positive: "
     << (config.loss.denominator_includes_positive ? "true" : "false") << '\n'
     << "seed: " << config.seed << '\n'
     << "render_seed: " << config.render_seed << '\n'
     << "noise_amplitude: " << config.render.noise_amplitude << '\n'
     << "scale: " << config.render.scale << '\n'
     << "threads: " << config.threads << '\n'
     << "wall_seconds: " << wall_seconds << '\n';
  if (!hardest_negative_distance_curve.empty()) {
    ss << "final_hardest_negative_distance: "
       << hardest_negative_distance_curve.back() << '\n';
  }
  ss << "loss_curve: " << JoinDoubles(loss_curve) << '\n'
     << "hardest_negative_distance_curve: "
     << JoinDoubles(hardest_negative_distance_curve) << '\n'
     << "step_losses: " << JoinDoubles(step_losses) << '\n';
  return std::move(ss).str();
}

TrainResult Train(std::span<const TypoPair> pairs,
                  std::span<const std::string> checking_list,
                  const TrainConfig& config,
                  std::optional<EncoderWeights> initial,
                  const TrainProgress& progress) {
  config.Validate();
  if (pairs.empty()) throw Error(ErrorCode::kEmptyDataset, "no training pairs");
  {
    std::unordered_map<std::string, bool> known;
    for (const auto& d : checking_list) known[d] = true;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      if (!known.count(pairs[i].source_domain)) {
        throw Error(ErrorCode::kUnknownDomain,
                    "pair " + std::to_string(i) + " source '" +
                        pairs[i].source_domain + "' is not in the checking list",
                    i);
      }
    }
  }
  const auto start = std::chrono::steady_clock::now();
  EncoderWeights weights =
      initial ? std::move(*initial)
              : InitWeights<float>(EncoderConfig::Standard(),
                                   DeriveSeed(config.seed, "init"));
  Trainer trainer(std::move(weights),
                  std::vector<std::string>(checking_list.begin(), checking_list.end()),
                  config);
  Rng shuffle_rng(DeriveSeed(config.seed, "shuffle"));
  std::vector<std::size_t> order(pairs.size());
  std::vector<double> hardest;
  TrainReport report;
  report.pairs = pairs.size();
  report.config = config;
  std::vector<TypoPair> batch;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    shuffle_rng.Shuffle(order.begin(), order.end());
    for (std::size_t begin = 0; begin < order.size();
         begin += static_cast<std::size_t>(config.batch_size)) {
      const std::size_t end =
          std::min(order.size(), begin + static_cast<std::size_t>(config.batch_size));
      batch.clear();
      for (std::size_t i = begin; i < end; ++i) batch.push_back(pairs[order[i]]);
      const StepResult r = trainer.Step(batch);
      report.step_losses.push_back(r.loss);
      hardest.push_back(r.hardest_negative_distance);
      if (progress) progress(r);
    }
  }
  report.steps = trainer.step();
  const std::size_t window = static_cast<std::size_t>(config.refresh_interval);
  for (std::size_t b = 0; b < report.step_losses.size(); b += window) {
    const std::size_t e = std::min(report.step_losses.size(), b + window);
    report.loss_curve.push_back(WindowMean(report.step_losses, b, e));
    report.hardest_negative_distance_curve.push_back(WindowMean(hardest, b, e));
  }
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {trainer.weights(), std::move(report)};
}

}  // namespace typotrace
