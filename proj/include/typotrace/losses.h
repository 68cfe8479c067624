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

#ifndef TYPOTRACE_LOSSES_H_
#define TYPOTRACE_LOSSES_H_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "typotrace/error.h"

namespace typotrace {

struct LossConfig {
  double margin = 0.2;        // triplet hinge margin M
  double temperature = 0.1;   // NT-Xent temperature tau
  int negatives = 8;          // b_n, hard negatives per anchor
  // When false the NT-Xent denominator sums negatives only, which admits
  // negative loss values.
  bool denominator_includes_positive = true;

  void Validate() const {
    if (!(margin >= 0.0) || !(temperature > 0.0) || negatives < 1) {
      throw Error(ErrorCode::kInvalidArgument,
                  "loss config requires margin >= 0, temperature > 0, "
                  "negatives >= 1");
    }
  }
};

template <typename T>
struct LossGradients {
  std::vector<T> anchor;
  std::vector<T> positive;
  std::vector<std::vector<T>> negatives;
};

namespace losses_internal {

template <typename T>
T Dot(std::span<const T> a, std::span<const T> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::kLengthMismatch, "embedding sizes differ");
  }
  T s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

template <typename T>
T SquaredDistance(std::span<const T> a, std::span<const T> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::kLengthMismatch, "embedding sizes differ");
  }
  T s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const T d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

// Adds scale * d(cos(u, v))/du to `out`.
template <typename T>
void AccumulateCosineGradient(std::span<const T> u, std::span<const T> v,
                              T scale, std::vector<T>& out) {
  const T nu = std::sqrt(Dot(u, u));
  const T nv = std::sqrt(Dot(v, v));
  const T cos = Dot(u, v) / (nu * nv);
  out.resize(u.size(), T(0));
  for (std::size_t i = 0; i < u.size(); ++i) {
    out[i] += scale * (v[i] / (nu * nv) - cos * u[i] / (nu * nu));
  }
}

}  // namespace losses_internal

template <typename T>
T CosineSimilarity(std::span<const T> u, std::span<const T> v) {
  using losses_internal::Dot;
  const T nu = std::sqrt(Dot(u, u));
  const T nv = std::sqrt(Dot(v, v));
  if (!(nu > 0) || !(nv > 0) || !std::isfinite(nu) || !std::isfinite(nv)) {
    throw Error(ErrorCode::kDegenerateNorm,
                "cosine similarity of a zero or non-finite vector");
  }
  return std::clamp(Dot(u, v) / (nu * nv), T(-1), T(1));
}

// max(|a-p|^2 - |a-n|^2 + M, 0). Gradients are zero when the hinge is
// inactive.
template <typename T>
T TripletLoss(std::span<const T> anchor, std::span<const T> positive,
              std::span<const T> negative, const LossConfig& config,
              LossGradients<T>* grads = nullptr) {
  using losses_internal::SquaredDistance;
  const T ap = SquaredDistance(anchor, positive);
  const T an = SquaredDistance(anchor, negative);
  const T raw = ap - an + static_cast<T>(config.margin);
  const T loss = std::max(raw, T(0));
  if (grads != nullptr) {
    const std::size_t n = anchor.size();
    grads->anchor.assign(n, T(0));
    grads->positive.assign(n, T(0));
    grads->negatives.assign(1, std::vector<T>(n, T(0)));
    if (raw > 0) {
      for (std::size_t i = 0; i < n; ++i) {
        grads->anchor[i] = 2 * (negative[i] - positive[i]);
        grads->positive[i] = -2 * (anchor[i] - positive[i]);
        grads->negatives[0][i] = 2 * (anchor[i] - negative[i]);
      }
    }
  }
  return loss;
}

// -log(exp(s_ap / tau) / Z) where Z sums exp(s_an / tau) over the negatives,
// plus exp(s_ap / tau) when config.denominator_includes_positive. Evaluated
// with a max shift so large 1/tau cannot overflow.
template <typename T>
T NtXentLoss(std::span<const T> anchor, std::span<const T> positive,
             const std::vector<std::span<const T>>& negatives,
             const LossConfig& config, LossGradients<T>* grads = nullptr) {
  if (negatives.empty()) {
    throw Error(ErrorCode::kEmptyNegatives, "NT-Xent needs negatives");
  }
  const T inv_tau = static_cast<T>(1.0 / config.temperature);
  const T s_ap = CosineSimilarity(anchor, positive);
  std::vector<T> logits;
  logits.reserve(negatives.size() + 1);
  const bool with_positive = config.denominator_includes_positive;
  if (with_positive) logits.push_back(s_ap * inv_tau);
  for (const auto& n : negatives) {
    logits.push_back(CosineSimilarity(anchor, n) * inv_tau);
  }
  const T shift = *std::max_element(logits.begin(), logits.end());
  T z = 0;
  for (T l : logits) z += std::exp(l - shift);
  const T log_z = shift + std::log(z);
  const T loss = log_z - s_ap * inv_tau;

  if (grads != nullptr) {
    using losses_internal::AccumulateCosineGradient;
    const std::size_t dim = anchor.size();
    grads->anchor.assign(dim, T(0));
    grads->positive.assign(dim, T(0));
    grads->negatives.assign(negatives.size(), std::vector<T>(dim, T(0)));
    // dL/ds for each similarity.
    T d_ap = -inv_tau;
    std::size_t offset = 0;
    if (with_positive) {
      d_ap += std::exp(logits[0] - log_z) * inv_tau;
      offset = 1;
    }
    AccumulateCosineGradient(anchor, positive, d_ap, grads->anchor);
    AccumulateCosineGradient(positive, anchor, d_ap, grads->positive);
    for (std::size_t k = 0; k < negatives.size(); ++k) {
      const T d_an = std::exp(logits[k + offset] - log_z) * inv_tau;
      AccumulateCosineGradient(anchor, negatives[k], d_an, grads->anchor);
      AccumulateCosineGradient(negatives[k], anchor, d_an,
                               grads->negatives[k]);
    }
  }
  return loss;
}

}  // namespace typotrace

#endif  // TYPOTRACE_LOSSES_H_
