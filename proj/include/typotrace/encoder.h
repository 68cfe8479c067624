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

#ifndef TYPOTRACE_ENCODER_H_
#define TYPOTRACE_ENCODER_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "typotrace/renderer.h"

namespace typotrace {

enum class LayerKind { kConv2D, kDense };
enum class Padding { kSame, kValid };
// kL2Normalize is a linear layer followed by division by its L2 norm; it may
// only appear last.
enum class Activation { kLeakyRelu, kTanh, kL2Normalize };

struct LayerSpec {
  LayerKind kind = LayerKind::kDense;
  int filters = 0;  // output channels (conv) or units (dense)
  int stride_h = 1;
  int stride_w = 1;
  int kernel_h = 1;
  int kernel_w = 1;
  Padding padding = Padding::kValid;
  Activation activation = Activation::kLeakyRelu;

  static LayerSpec Conv(int filters, int stride_h, int stride_w, int kernel_h,
                        int kernel_w, Padding padding, Activation activation);
  static LayerSpec Dense(int units, Activation activation);

  friend bool operator==(const LayerSpec&, const LayerSpec&) = default;
};

struct TensorShape {
  int height = 1;
  int width = 1;
  int channels = 1;

  int size() const { return height * width * channels; }
  friend bool operator==(const TensorShape&, const TensorShape&) = default;
};

struct EncoderConfig {
  int input_height = SwypeImage::kHeight;
  int input_width = SwypeImage::kWidth;
  int input_channels = SwypeImage::kChannels;
  float leaky_slope = 0.01f;
  std::vector<LayerSpec> layers;

  // The ten-layer encoder: two same-padded 3x3 convs, five valid [3,5]
  // convs, then dense 1024 (tanh), 512 (leaky relu), 256 (L2 normalized).
  static EncoderConfig Standard();

  int embedding_dim() const;
  friend bool operator==(const EncoderConfig&, const EncoderConfig&) = default;
};

// Input shape followed by each layer's output shape. Dense outputs are
// 1x1xN. Throws kShapeMismatch if any layer produces an empty output or the
// layer list is malformed.
std::vector<TensorShape> ShapeTrace(const EncoderConfig& config);

// Kernel tensors are laid out (kernel_h, kernel_w, in_channels, filters) for
// conv layers and (in, out) for dense layers; bias tensors follow each kernel.
std::vector<std::vector<int>> ParameterShapes(const EncoderConfig& config);

template <typename T>
struct EncoderParams {
  EncoderConfig config;
  std::vector<std::vector<T>> tensors;  // kernel, bias per layer

  std::size_t ParameterCount() const;
  friend bool operator==(const EncoderParams&, const EncoderParams&) = default;
};

using EncoderWeights = EncoderParams<float>;
using Embedding = std::vector<float>;

// He-uniform for leaky relu layers, Xavier-uniform otherwise; zero biases.
template <typename T>
EncoderParams<T> InitWeights(const EncoderConfig& config, std::uint64_t seed);

template <typename T>
EncoderParams<T> ZerosLike(const EncoderParams<T>& params);

template <typename To, typename From>
EncoderParams<To> CastParams(const EncoderParams<From>& params) {
  EncoderParams<To> out;
  out.config = params.config;
  out.tensors.reserve(params.tensors.size());
  for (const auto& t : params.tensors) out.tensors.emplace_back(t.begin(), t.end());
  return out;
}

// Stateful evaluator of one network. Forward keeps the activations that
// Backward needs, so one instance serves one image at a time. The params
// object must outlive the net.
template <typename T>
class EncoderNet {
 public:
  explicit EncoderNet(const EncoderParams<T>& params);

  // Input laid out (row, col, channel). Throws kShapeMismatch,
  // kDegenerateNorm or kNonFiniteActivation.
  std::span<const T> Forward(std::span<const T> input);

  // Accumulates d(loss)/d(params) into `grads` given d(loss)/d(embedding) for
  // the most recent Forward.
  void Backward(std::span<const T> grad_embedding, EncoderParams<T>& grads);

  const std::vector<TensorShape>& shapes() const { return shapes_; }

 private:
  const EncoderParams<T>& params_;
  std::vector<TensorShape> shapes_;
  std::vector<std::vector<T>> inputs_;   // im2col matrix or dense input
  std::vector<std::vector<T>> outputs_;  // post-activation
  std::vector<T> grad_a_;
  std::vector<T> grad_b_;
  std::vector<T> grad_col_;
  T norm_ = 0;
};

Embedding Forward(const SwypeImage& image, const EncoderWeights& weights);

// Errors carry the index of the failing image.
std::vector<Embedding> ForwardBatch(std::span<const SwypeImage> images,
                                    const EncoderWeights& weights,
                                    int threads = 1);

// "TSW1" container: 4-byte magic, little-endian uint32 manifest length, a
// text manifest (layer specs, tensor names and shapes, dtype, byte order,
// flatten order), then raw little-endian float32 tensors in manifest order.
std::string SerializeWeights(const EncoderWeights& weights);
EncoderWeights DeserializeWeights(std::string_view bytes);
void SaveWeights(const EncoderWeights& weights,
                 const std::filesystem::path& path);
EncoderWeights LoadWeights(const std::filesystem::path& path);

// SHA-256 of the serialized container, i.e. of the saved weight file.
std::string WeightsFingerprint(const EncoderWeights& weights);

}  // namespace typotrace

#endif  // TYPOTRACE_ENCODER_H_
