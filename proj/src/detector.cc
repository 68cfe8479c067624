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

#include "typotrace/detector.h"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <sstream>

#include "typotrace/error.h"
#include "typotrace/util.h"

namespace typotrace {

EmbeddingIndex BuildIndex(std::span<const std::string> checking_list,
                          const EncoderWeights& weights, double threshold,
                          std::uint64_t render_seed, int threads) {
  if (checking_list.empty()) {
    throw Error(ErrorCode::kEmpty, "checking list is empty");
  }
  if (!(threshold > 0.0 && threshold <= 2.0)) {
    throw Error(ErrorCode::kInvalidArgument, "threshold must lie in (0, 2]");
  }
  RenderConfig render;
  std::vector<SwypeImage> images;
  try {
    images = RenderBatch(checking_list, render, render_seed);
  } catch (const Error& e) {
    RethrowWithContext(e, "checking-list domain '" +
                              checking_list[e.index().value_or(0)] + "'",
                       e.index());
  }
  std::vector<Embedding> embeddings;
  try {
    embeddings = ForwardBatch(images, weights, threads);
  } catch (const Error& e) {
    RethrowWithContext(e, "checking-list domain '" +
                              checking_list[e.index().value_or(0)] + "'",
                       e.index());
  }
  EmbeddingIndex index;
  index.domains.assign(checking_list.begin(), checking_list.end());
  index.dim = weights.config.embedding_dim();
  index.threshold = threshold;
  index.render_seed = render_seed;
  index.model_fingerprint = WeightsFingerprint(weights);
  index.vectors.reserve(checking_list.size() * index.dim);
  for (const auto& e : embeddings) {
    index.vectors.insert(index.vectors.end(), e.begin(), e.end());
  }
  return index;
}

DetectionResult ScanIndex(std::string_view query,
                          std::span<const float> embedding,
                          const EmbeddingIndex& index) {
  if (embedding.size() != static_cast<std::size_t>(index.dim)) {
    throw Error(ErrorCode::kLengthMismatch, "query embedding size differs");
  }
  if (index.size() == 0) throw Error(ErrorCode::kEmpty, "index is empty");
  std::vector<std::pair<double, std::size_t>> scored(index.size());
  for (std::size_t i = 0; i < index.size(); ++i) {
    const auto row = index.row(i);
    double sq = 0.0;
    for (std::size_t j = 0; j < row.size(); ++j) {
      const double d = static_cast<double>(embedding[j]) - row[j];
      sq += d * d;
    }
    scored[i] = {std::sqrt(sq), i};
  }
  const std::size_t keep = std::min<std::size_t>(index.size(), kRunnerUps + 1);
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(keep),
                    scored.end());
  DetectionResult r;
  r.query = std::string(query);
  r.distance = scored[0].first;
  r.match_index = scored[0].second;
  r.match = index.domains[r.match_index];
  r.flagged = r.distance < index.threshold;
  for (std::size_t i = 1; i < keep; ++i) {
    r.runner_ups.push_back({index.domains[scored[i].second], scored[i].first});
  }
  return r;
}

Detector::Detector(EncoderWeights weights, EmbeddingIndex index,
                   RenderConfig render)
    : weights_(std::move(weights)), index_(std::move(index)), render_(std::move(render)) {
  render_.seed_mode = SeedMode::kCanonical;
  render_.Validate();
  const std::string fingerprint = WeightsFingerprint(weights_);
  if (fingerprint != index_.model_fingerprint) {
    throw Error(ErrorCode::kFingerprintMismatch,
                "index was built with model " + index_.model_fingerprint +
                    " but weights are " + fingerprint);
  }
  if (index_.dim != weights_.config.embedding_dim()) {
    throw Error(ErrorCode::kShapeMismatch, "index dimension differs from model");
  }
}

Embedding Detector::Embed(std::string_view domain) const {
  return Forward(RenderCanonical(domain, render_, index_.render_seed), weights_);
}

DetectionResult Detector::Query(std::string_view domain) const {
  const Embedding e = Embed(domain);
  return ScanIndex(NormalizeDomain(domain), e, index_);
}

std::vector<DetectionResult> Detector::QueryBatch(
    std::span<const std::string> domains, int threads) const {
  std::vector<SwypeImage> images;
  images.reserve(domains.size());
  for (std::size_t i = 0; i < domains.size(); ++i) {
    try {
      images.push_back(RenderCanonical(domains[i], render_, index_.render_seed));
    } catch (const Error& e) {
      RethrowWithContext(e, "query '" + domains[i] + "'", i);
    }
  }
  const auto embeddings = ForwardBatch(images, weights_, threads);
  std::vector<DetectionResult> out(domains.size());
  ParallelFor(domains.size(), threads, [&](std::size_t i) {
    out[i] = ScanIndex(NormalizeDomain(domains[i]), embeddings[i], index_);
  });
  return out;
}

// ---------------------------------------------------------------------------
// TSI1 container.

namespace {

constexpr std::string_view kIndexMagic = "TSI1";

[[noreturn]] void FormatError(const std::string& message) {
  throw Error(ErrorCode::kFormatError, message);
}

void AppendU32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint32_t ReadU32(std::string_view bytes, std::size_t offset) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) {
    v |= static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[offset + i]))
         << (8 * i);
  }
  return v;
}

std::string DoubleToString(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, r.ptr);
}

template <typename Int>
Int ParseNumber(const std::string& s) {
  Int v{};
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size()) {
    FormatError("bad number '" + s + "' in index manifest");
  }
  return v;
}

}  // namespace

std::string SerializeIndex(const EmbeddingIndex& index) {
  if (index.vectors.size() != index.size() * static_cast<std::size_t>(index.dim)) {
    throw Error(ErrorCode::kShapeMismatch, "index vectors do not match count");
  }
  std::ostringstream m;
  m << "format TSI1\n"
    << "dtype float32\n"
    << "byte_order little\n"
    << "fingerprint " << index.model_fingerprint << '\n'
    << "count " << index.size() << '\n'
    << "dim " << index.dim << '\n'
    << "threshold " << DoubleToString(index.threshold) << '\n'
    << "render_seed " << index.render_seed << '\n'
    << "end\n";
  const std::string manifest = std::move(m).str();
  std::string out(kIndexMagic);
  AppendU32(out, static_cast<std::uint32_t>(manifest.size()));
  out += manifest;
  for (float v : index.vectors) AppendU32(out, std::bit_cast<std::uint32_t>(v));
  for (const auto& d : index.domains) {
    AppendU32(out, static_cast<std::uint32_t>(d.size()));
    out += d;
  }
  return out;
}

EmbeddingIndex DeserializeIndex(std::string_view bytes) {
  if (bytes.size() < 8 || bytes.substr(0, 4) != kIndexMagic) {
    FormatError("bad magic; not a TSI1 index file");
  }
  const std::uint32_t manifest_size = ReadU32(bytes, 4);
  if (bytes.size() - 8 < manifest_size) FormatError("truncated manifest");
  std::istringstream m{std::string(bytes.substr(8, manifest_size))};
  EmbeddingIndex index;
  std::size_t count = 0;
  bool ended = false, have_count = false, have_dim = false, have_fp = false;
  for (std::string line; std::getline(m, line);) {
    std::istringstream ls(line);
    std::string key, value;
    ls >> key;
    if (key.empty()) continue;
    if (key == "end") {
      ended = true;
      break;
    }
    ls >> value;
    if (key == "format") {
      if (value != "TSI1") FormatError("bad format line");
    } else if (key == "dtype") {
      if (value != "float32") FormatError("unsupported dtype");
    } else if (key == "byte_order") {
      if (value != "little") FormatError("unsupported byte order");
    } else if (key == "fingerprint") {
      index.model_fingerprint = value;
      have_fp = !value.empty();
    } else if (key == "count") {
      count = ParseNumber<std::size_t>(value);
      have_count = true;
    } else if (key == "dim") {
      index.dim = ParseNumber<int>(value);
      have_dim = true;
    } else if (key == "threshold") {
      index.threshold = ParseNumber<double>(value);
    } else if (key == "render_seed") {
      index.render_seed = ParseNumber<std::uint64_t>(value);
    } else {
      FormatError("unknown manifest key '" + key + "'");
    }
  }
  if (!ended || !have_count || !have_dim || !have_fp) {
    FormatError("incomplete index manifest");
  }
  if (index.dim <= 0) FormatError("bad dimension");
  std::size_t offset = 8 + manifest_size;
  const std::size_t floats = count * static_cast<std::size_t>(index.dim);
  if ((bytes.size() - offset) / 4 < floats) FormatError("truncated vectors");
  index.vectors.resize(floats);
  for (std::size_t i = 0; i < floats; ++i, offset += 4) {
    index.vectors[i] = std::bit_cast<float>(ReadU32(bytes, offset));
  }
  index.domains.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    if (bytes.size() - offset < 4) FormatError("truncated domain table");
    const std::uint32_t len = ReadU32(bytes, offset);
    offset += 4;
    if (bytes.size() - offset < len) FormatError("truncated domain string");
    index.domains.emplace_back(bytes.substr(offset, len));
    offset += len;
  }
  if (offset != bytes.size()) FormatError("trailing bytes after domain table");
  return index;
}

void SaveIndex(const EmbeddingIndex& index, const std::filesystem::path& path) {
  AtomicWriteFile(path, SerializeIndex(index));
}

EmbeddingIndex LoadIndex(const std::filesystem::path& path) {
  return DeserializeIndex(ReadFileBytes(path));
}

}  // namespace typotrace
