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

#ifndef TYPOTRACE_DETECTOR_H_
#define TYPOTRACE_DETECTOR_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "typotrace/encoder.h"
#include "typotrace/renderer.h"

namespace typotrace {

inline constexpr double kDefaultThreshold = 0.6;
inline constexpr int kRunnerUps = 5;

// Frozen embeddings of the checking list.
struct EmbeddingIndex {
  std::vector<std::string> domains;
  std::vector<float> vectors;  // domains.size() x dim, row-major
  int dim = 0;
  std::string model_fingerprint;
  double threshold = kDefaultThreshold;
  std::uint64_t render_seed = 0;

  std::size_t size() const { return domains.size(); }
  std::span<const float> row(std::size_t i) const {
    return std::span<const float>(vectors).subspan(i * dim, dim);
  }
  friend bool operator==(const EmbeddingIndex&,
                         const EmbeddingIndex&) = default;
};

struct Neighbor {
  std::string domain;
  double distance = 0.0;
};

struct DetectionResult {
  std::string query;
  bool flagged = false;  // distance < threshold
  std::string match;
  std::size_t match_index = 0;
  double distance = 0.0;
  std::vector<Neighbor> runner_ups;  // next nearest after the match
};

EmbeddingIndex BuildIndex(std::span<const std::string> checking_list,
                          const EncoderWeights& weights,
                          double threshold = kDefaultThreshold,
                          std::uint64_t render_seed = 0, int threads = 1);

// Exact scan of every row. Ties go to the lower index.
DetectionResult ScanIndex(std::string_view query,
                          std::span<const float> embedding,
                          const EmbeddingIndex& index);

// Binds an index to the weights that built it.
class Detector {
 public:
  // Throws kFingerprintMismatch when the index was built from other weights.
  Detector(EncoderWeights weights, EmbeddingIndex index,
           RenderConfig render = {});

  DetectionResult Query(std::string_view domain) const;
  // Errors carry the index of the failing domain.
  std::vector<DetectionResult> QueryBatch(std::span<const std::string> domains,
                                          int threads = 1) const;
  Embedding Embed(std::string_view domain) const;

  const EmbeddingIndex& index() const { return index_; }
  const EncoderWeights& weights() const { return weights_; }

 private:
  EncoderWeights weights_;
  EmbeddingIndex index_;
  RenderConfig render_;
};

// "TSI1" container: magic, little-endian uint32 manifest length, text
// manifest (fingerprint, count, dim, threshold, render seed), raw
// little-endian float32 rows, then uint32-length-prefixed UTF-8 domains.
std::string SerializeIndex(const EmbeddingIndex& index);
EmbeddingIndex DeserializeIndex(std::string_view bytes);
void SaveIndex(const EmbeddingIndex& index, const std::filesystem::path& path);
EmbeddingIndex LoadIndex(const std::filesystem::path& path);

}  // namespace typotrace

#endif  // TYPOTRACE_DETECTOR_H_
