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

#include "typotrace/encoder.h"

#include <Eigen/Dense>

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <sstream>

#include "typotrace/error.h"
#include "typotrace/util.h"

namespace typotrace {

LayerSpec LayerSpec::Conv(int filters, int stride_h, int stride_w,
                          int kernel_h, int kernel_w, Padding padding,
                          Activation activation) {
  return LayerSpec{LayerKind::kConv2D, filters, stride_h, stride_w,
                   kernel_h,           kernel_w, padding,  activation};
}

LayerSpec LayerSpec::Dense(int units, Activation activation) {
  LayerSpec spec;
  spec.kind = LayerKind::kDense;
  spec.filters = units;
  spec.activation = activation;
  return spec;
}

EncoderConfig EncoderConfig::Standard() {
  using A = Activation;
  using P = Padding;
  EncoderConfig config;
  config.layers = {
      LayerSpec::Conv(8, 1, 1, 3, 3, P::kSame, A::kLeakyRelu),
      LayerSpec::Conv(16, 1, 1, 3, 3, P::kSame, A::kLeakyRelu),
      LayerSpec::Conv(64, 1, 1, 3, 5, P::kValid, A::kLeakyRelu),
      LayerSpec::Conv(64, 1, 2, 3, 5, P::kValid, A::kLeakyRelu),
      LayerSpec::Conv(128, 2, 2, 3, 5, P::kValid, A::kLeakyRelu),
      LayerSpec::Conv(128, 2, 2, 3, 5, P::kValid, A::kLeakyRelu),
      LayerSpec::Conv(128, 2, 2, 3, 5, P::kValid, A::kLeakyRelu),
      LayerSpec::Dense(1024, A::kTanh),
      LayerSpec::Dense(512, A::kLeakyRelu),
      LayerSpec::Dense(256, A::kL2Normalize),
  };
  return config;
}

int EncoderConfig::embedding_dim() const {
  return layers.empty() ? 0 : layers.back().filters;
}

namespace {

[[noreturn]] void ShapeError(const std::string& message) {
  throw Error(ErrorCode::kShapeMismatch, message);
}

int ConvOutput(int in, int kernel, int stride, Padding padding) {
  if (padding == Padding::kSame) return (in + stride - 1) / stride;
  if (in < kernel) return 0;
  return (in - kernel) / stride + 1;
}

}  // namespace

std::vector<TensorShape> ShapeTrace(const EncoderConfig& config) {
  if (config.input_height <= 0 || config.input_width <= 0 ||
      config.input_channels <= 0) {
    ShapeError("input shape must be positive");
  }
  if (config.layers.empty()) ShapeError("encoder has no layers");
  if (!(config.leaky_slope > 0.0f) || !std::isfinite(config.leaky_slope)) {
    ShapeError("leaky slope must be positive");
  }
  std::vector<TensorShape> shapes;
  shapes.push_back(
      {config.input_height, config.input_width, config.input_channels});
  bool seen_dense = false;
  for (std::size_t l = 0; l < config.layers.size(); ++l) {
    const LayerSpec& spec = config.layers[l];
    const TensorShape in = shapes.back();
    const std::string where = "layer " + std::to_string(l);
    if (spec.filters <= 0) ShapeError(where + ": filters must be positive");
    if (spec.activation == Activation::kL2Normalize &&
        l + 1 != config.layers.size()) {
      ShapeError(where + ": L2 normalization must be the last layer");
    }
    if (spec.kind == LayerKind::kConv2D) {
      if (seen_dense) ShapeError(where + ": convolution after dense layer");
      if (spec.kernel_h <= 0 || spec.kernel_w <= 0 || spec.stride_h <= 0 ||
          spec.stride_w <= 0) {
        ShapeError(where + ": kernel and stride must be positive");
      }
      const TensorShape out{
          ConvOutput(in.height, spec.kernel_h, spec.stride_h, spec.padding),
          ConvOutput(in.width, spec.kernel_w, spec.stride_w, spec.padding),
          spec.filters};
      if (out.height <= 0 || out.width <= 0) {
        ShapeError(where + ": kernel larger than input");
      }
      shapes.push_back(out);
    } else {
      seen_dense = true;
      shapes.push_back({1, 1, spec.filters});
    }
  }
  if (config.layers.back().activation != Activation::kL2Normalize) {
    ShapeError("last layer must be L2 normalized");
  }
  return shapes;
}

std::vector<std::vector<int>> ParameterShapes(const EncoderConfig& config) {
  const std::vector<TensorShape> shapes = ShapeTrace(config);
  std::vector<std::vector<int>> out;
  for (std::size_t l = 0; l < config.layers.size(); ++l) {
    const LayerSpec& spec = config.layers[l];
    if (spec.kind == LayerKind::kConv2D) {
      out.push_back(
          {spec.kernel_h, spec.kernel_w, shapes[l].channels, spec.filters});
    } else {
      out.push_back({shapes[l].size(), spec.filters});
    }
    out.push_back({spec.filters});
  }
  return out;
}

namespace {

std::size_t Product(const std::vector<int>& dims) {
  std::size_t n = 1;
  for (int d : dims) n *= static_cast<std::size_t>(d);
  return n;
}

void CheckTensors(const EncoderConfig& config,
                  const std::vector<std::size_t>& sizes) {
  const auto shapes = ParameterShapes(config);
  if (shapes.size() != sizes.size()) {
    ShapeError("expected " + std::to_string(shapes.size()) + " tensors, got " +
               std::to_string(sizes.size()));
  }
  for (std::size_t i = 0; i < shapes.size(); ++i) {
    if (Product(shapes[i]) != sizes[i]) {
      ShapeError("tensor " + std::to_string(i) + " has " +
                 std::to_string(sizes[i]) + " values, expected " +
                 std::to_string(Product(shapes[i])));
    }
  }
}

template <typename T>
std::vector<std::size_t> TensorSizes(const EncoderParams<T>& params) {
  std::vector<std::size_t> sizes;
  for (const auto& t : params.tensors) sizes.push_back(t.size());
  return sizes;
}

}  // namespace

template <typename T>
std::size_t EncoderParams<T>::ParameterCount() const {
  std::size_t n = 0;
  for (const auto& t : tensors) n += t.size();
  return n;
}

template <typename T>
EncoderParams<T> InitWeights(const EncoderConfig& config, std::uint64_t seed) {
  const auto shapes = ParameterShapes(config);
  EncoderParams<T> params;
  params.config = config;
  Rng rng(seed);
  for (std::size_t l = 0; l < config.layers.size(); ++l) {
    const LayerSpec& spec = config.layers[l];
    const std::vector<int>& kshape = shapes[2 * l];
    double fan_in = 0, fan_out = 0;
    if (spec.kind == LayerKind::kConv2D) {
      const double receptive = static_cast<double>(kshape[0]) * kshape[1];
      fan_in = receptive * kshape[2];
      fan_out = receptive * kshape[3];
    } else {
      fan_in = kshape[0];
      fan_out = kshape[1];
    }
    const double limit = spec.activation == Activation::kLeakyRelu
                             ? std::sqrt(6.0 / fan_in)
                             : std::sqrt(6.0 / (fan_in + fan_out));
    std::vector<T> kernel(Product(kshape));
    for (T& w : kernel) w = static_cast<T>(rng.Uniform(-limit, limit));
    params.tensors.push_back(std::move(kernel));
    params.tensors.push_back(std::vector<T>(Product(shapes[2 * l + 1]), T(0)));
  }
  return params;
}

template <typename T>
EncoderParams<T> ZerosLike(const EncoderParams<T>& params) {
  EncoderParams<T> out;
  out.config = params.config;
  for (const auto& t : params.tensors) out.tensors.emplace_back(t.size(), T(0));
  return out;
}

namespace {

template <typename T>
using MatrixRM = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename T>
using MapRM = Eigen::Map<MatrixRM<T>>;
template <typename T>
using ConstMapRM = Eigen::Map<const MatrixRM<T>>;
template <typename T>
using RowVec = Eigen::Matrix<T, 1, Eigen::Dynamic>;

struct ConvGeometry {
  int in_h, in_w, in_c;
  int out_h, out_w, out_c;
  int kh, kw, sh, sw;
  int pad_top, pad_left;

  int rows() const { return out_h * out_w; }
  int depth() const { return kh * kw * in_c; }
};

ConvGeometry Geometry(const LayerSpec& spec, const TensorShape& in,
                      const TensorShape& out) {
  ConvGeometry g{in.height,     in.width,     in.channels,  out.height,
                 out.width,     out.channels, spec.kernel_h, spec.kernel_w,
                 spec.stride_h, spec.stride_w, 0,            0};
  if (spec.padding == Padding::kSame) {
    const int pad_h = std::max((out.height - 1) * g.sh + g.kh - in.height, 0);
    const int pad_w = std::max((out.width - 1) * g.sw + g.kw - in.width, 0);
    g.pad_top = pad_h / 2;
    g.pad_left = pad_w / 2;
  }
  return g;
}

// Rows are output positions (row-major), columns are (ky, kx, channel).
template <typename T>
void Im2Col(const T* in, const ConvGeometry& g, T* col) {
  const int depth = g.depth();
  for (int oy = 0; oy < g.out_h; ++oy) {
    for (int ox = 0; ox < g.out_w; ++ox) {
      T* dst = col + static_cast<std::size_t>(oy * g.out_w + ox) * depth;
      for (int ky = 0; ky < g.kh; ++ky) {
        const int iy = oy * g.sh + ky - g.pad_top;
        for (int kx = 0; kx < g.kw; ++kx, dst += g.in_c) {
          const int ix = ox * g.sw + kx - g.pad_left;
          if (iy < 0 || iy >= g.in_h || ix < 0 || ix >= g.in_w) {
            std::fill(dst, dst + g.in_c, T(0));
          } else {
            const T* src = in + static_cast<std::size_t>(iy * g.in_w + ix) * g.in_c;
            std::copy(src, src + g.in_c, dst);
          }
        }
      }
    }
  }
}

template <typename T>
void Col2Im(const T* col, const ConvGeometry& g, T* in) {
  std::fill(in, in + static_cast<std::size_t>(g.in_h) * g.in_w * g.in_c, T(0));
  const int depth = g.depth();
  for (int oy = 0; oy < g.out_h; ++oy) {
    for (int ox = 0; ox < g.out_w; ++ox) {
      const T* src = col + static_cast<std::size_t>(oy * g.out_w + ox) * depth;
      for (int ky = 0; ky < g.kh; ++ky) {
        const int iy = oy * g.sh + ky - g.pad_top;
        for (int kx = 0; kx < g.kw; ++kx, src += g.in_c) {
          const int ix = ox * g.sw + kx - g.pad_left;
          if (iy < 0 || iy >= g.in_h || ix < 0 || ix >= g.in_w) continue;
          T* dst = in + static_cast<std::size_t>(iy * g.in_w + ix) * g.in_c;
          for (int c = 0; c < g.in_c; ++c) dst[c] += src[c];
        }
      }
    }
  }
}

}  // namespace

template <typename T>
EncoderNet<T>::EncoderNet(const EncoderParams<T>& params)
    : params_(params), shapes_(ShapeTrace(params.config)) {
  CheckTensors(params.config, TensorSizes(params));
  const std::size_t n = params.config.layers.size();
  inputs_.resize(n);
  outputs_.resize(n);
}

template <typename T>
std::span<const T> EncoderNet<T>::Forward(std::span<const T> input) {
  if (input.size() != static_cast<std::size_t>(shapes_[0].size())) {
    ShapeError("input has " + std::to_string(input.size()) +
               " values, expected " + std::to_string(shapes_[0].size()));
  }
  const auto& layers = params_.config.layers;
  const T slope = static_cast<T>(params_.config.leaky_slope);
  const T* x = input.data();
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const LayerSpec& spec = layers[l];
    const std::vector<T>& kernel = params_.tensors[2 * l];
    const std::vector<T>& bias = params_.tensors[2 * l + 1];
    std::vector<T>& out = outputs_[l];
    out.resize(shapes_[l + 1].size());
    if (spec.kind == LayerKind::kConv2D) {
      const ConvGeometry g = Geometry(spec, shapes_[l], shapes_[l + 1]);
      std::vector<T>& col = inputs_[l];
      col.resize(static_cast<std::size_t>(g.rows()) * g.depth());
      Im2Col(x, g, col.data());
      MapRM<T> y(out.data(), g.rows(), g.out_c);
      y.noalias() = ConstMapRM<T>(col.data(), g.rows(), g.depth()) *
                    ConstMapRM<T>(kernel.data(), g.depth(), g.out_c);
      y.rowwise() += Eigen::Map<const RowVec<T>>(bias.data(), g.out_c);
    } else {
      const int in_n = shapes_[l].size();
      inputs_[l].assign(x, x + in_n);
      Eigen::Map<RowVec<T>> y(out.data(), spec.filters);
      y.noalias() = Eigen::Map<const RowVec<T>>(inputs_[l].data(), in_n) *
                    ConstMapRM<T>(kernel.data(), in_n, spec.filters);
      y += Eigen::Map<const RowVec<T>>(bias.data(), spec.filters);
    }
    switch (spec.activation) {
      case Activation::kLeakyRelu:
        for (T& v : out) v = v > T(0) ? v : v * slope;
        break;
      case Activation::kTanh:
        for (T& v : out) v = std::tanh(v);
        break;
      case Activation::kL2Normalize: {
        T sq = 0;
        for (T v : out) sq += v * v;
        if (!std::isfinite(sq)) {
          throw Error(ErrorCode::kNonFiniteActivation,
                      "non-finite activation before normalization");
        }
        norm_ = std::sqrt(sq);
        if (!(norm_ > T(0))) {
          throw Error(ErrorCode::kDegenerateNorm,
                      "embedding has zero norm before normalization");
        }
        for (T& v : out) v /= norm_;
        break;
      }
    }
    x = out.data();
  }
  const std::vector<T>& embedding = outputs_.back();
  for (T v : embedding) {
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::kNonFiniteActivation, "non-finite embedding");
    }
  }
  return embedding;
}

template <typename T>
void EncoderNet<T>::Backward(std::span<const T> grad_embedding,
                             EncoderParams<T>& grads) {
  const auto& layers = params_.config.layers;
  const std::vector<T>& embedding = outputs_.back();
  if (grad_embedding.size() != embedding.size()) {
    ShapeError("embedding gradient has wrong size");
  }
  if (grads.tensors.size() != params_.tensors.size()) {
    ShapeError("gradient accumulator does not match the network");
  }
  const T slope = static_cast<T>(params_.config.leaky_slope);
  grad_a_.assign(grad_embedding.begin(), grad_embedding.end());

  for (std::size_t l = layers.size(); l-- > 0;) {
    const LayerSpec& spec = layers[l];
    const std::vector<T>& out = outputs_[l];
    std::vector<T>& g = grad_a_;
    switch (spec.activation) {
      case Activation::kLeakyRelu:
        for (std::size_t i = 0; i < g.size(); ++i) {
          if (!(out[i] > T(0))) g[i] *= slope;
        }
        break;
      case Activation::kTanh:
        for (std::size_t i = 0; i < g.size(); ++i) g[i] *= T(1) - out[i] * out[i];
        break;
      case Activation::kL2Normalize: {
        T dot = 0;
        for (std::size_t i = 0; i < g.size(); ++i) dot += out[i] * g[i];
        for (std::size_t i = 0; i < g.size(); ++i) {
          g[i] = (g[i] - out[i] * dot) / norm_;
        }
        break;
      }
    }
    const std::vector<T>& kernel = params_.tensors[2 * l];
    std::vector<T>& d_kernel = grads.tensors[2 * l];
    std::vector<T>& d_bias = grads.tensors[2 * l + 1];
    if (spec.kind == LayerKind::kConv2D) {
      const ConvGeometry g_ = Geometry(spec, shapes_[l], shapes_[l + 1]);
      ConstMapRM<T> col(inputs_[l].data(), g_.rows(), g_.depth());
      ConstMapRM<T> dy(g.data(), g_.rows(), g_.out_c);
      MapRM<T>(d_kernel.data(), g_.depth(), g_.out_c).noalias() +=
          col.transpose() * dy;
      Eigen::Map<RowVec<T>>(d_bias.data(), g_.out_c) += dy.colwise().sum();
      if (l > 0) {
        grad_col_.resize(static_cast<std::size_t>(g_.rows()) * g_.depth());
        MapRM<T>(grad_col_.data(), g_.rows(), g_.depth()).noalias() =
            dy * ConstMapRM<T>(kernel.data(), g_.depth(), g_.out_c).transpose();
        grad_b_.resize(shapes_[l].size());
        Col2Im(grad_col_.data(), g_, grad_b_.data());
      }
    } else {
      const int in_n = shapes_[l].size();
      Eigen::Map<const RowVec<T>> x(inputs_[l].data(), in_n);
      Eigen::Map<const RowVec<T>> dy(g.data(), spec.filters);
      MapRM<T>(d_kernel.data(), in_n, spec.filters).noalias() +=
          x.transpose() * dy;
      Eigen::Map<RowVec<T>>(d_bias.data(), spec.filters) += dy;
      if (l > 0) {
        grad_b_.resize(in_n);
        Eigen::Map<RowVec<T>>(grad_b_.data(), in_n).noalias() =
            dy * ConstMapRM<T>(kernel.data(), in_n, spec.filters).transpose();
      }
    }
    if (l > 0) std::swap(grad_a_, grad_b_);
  }
}

Embedding Forward(const SwypeImage& image, const EncoderWeights& weights) {
  EncoderNet<float> net(weights);
  const auto e = net.Forward(image.data());
  return Embedding(e.begin(), e.end());
}

std::vector<Embedding> ForwardBatch(std::span<const SwypeImage> images,
                                    const EncoderWeights& weights,
                                    int threads) {
  std::vector<Embedding> out(images.size());
  const std::size_t chunks = std::min<std::size_t>(
      images.size(), static_cast<std::size_t>(std::max(threads, 1)));
  ParallelFor(chunks, threads, [&](std::size_t c) {
    EncoderNet<float> net(weights);
    const std::size_t begin = images.size() * c / chunks;
    const std::size_t end = images.size() * (c + 1) / chunks;
    for (std::size_t i = begin; i < end; ++i) {
      try {
        const auto e = net.Forward(images[i].data());
        out[i].assign(e.begin(), e.end());
      } catch (const Error& e) {
        RethrowWithContext(e, "image " + std::to_string(i), i);
      }
    }
  });
  return out;
}

// ---------------------------------------------------------------------------
// TSW1 container.

namespace {

constexpr std::string_view kWeightsMagic = "TSW1";

std::string_view ActivationName(Activation a) {
  switch (a) {
    case Activation::kLeakyRelu: return "leaky_relu";
    case Activation::kTanh: return "tanh";
    case Activation::kL2Normalize: return "l2_normalize";
  }
  return "?";
}

[[noreturn]] void FormatError(const std::string& message) {
  throw Error(ErrorCode::kFormatError, message);
}

Activation ParseActivation(std::string_view s) {
  if (s == "leaky_relu") return Activation::kLeakyRelu;
  if (s == "tanh") return Activation::kTanh;
  if (s == "l2_normalize") return Activation::kL2Normalize;
  FormatError("unknown activation '" + std::string(s) + "'");
}

std::string FloatToString(float v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, r.ptr);
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

std::string JoinDims(const std::vector<int>& dims) {
  std::string s;
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(dims[i]);
  }
  return s;
}

// key=value lookup within a manifest line.
std::string Field(const std::vector<std::string>& tokens, std::string_view key) {
  for (const auto& t : tokens) {
    if (t.size() > key.size() && t.compare(0, key.size(), key) == 0 &&
        t[key.size()] == '=') {
      return t.substr(key.size() + 1);
    }
  }
  FormatError("manifest line lacks '" + std::string(key) + "'");
}

int ParseInt(std::string_view s) {
  int v = 0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size()) {
    FormatError("bad integer '" + std::string(s) + "'");
  }
  return v;
}

std::pair<int, int> ParsePair(const std::string& s) {
  const auto comma = s.find(',');
  if (comma == std::string::npos) FormatError("bad pair '" + s + "'");
  return {ParseInt(std::string_view(s).substr(0, comma)),
          ParseInt(std::string_view(s).substr(comma + 1))};
}

std::vector<std::string> Tokens(const std::string& line) {
  std::istringstream ss(line);
  std::vector<std::string> out;
  for (std::string t; ss >> t;) out.push_back(t);
  return out;
}

}  // namespace

std::string SerializeWeights(const EncoderWeights& weights) {
  const EncoderConfig& config = weights.config;
  const auto shapes = ParameterShapes(config);
  CheckTensors(config, TensorSizes(weights));
  std::ostringstream m;
  m << "format TSW1\n"
    << "dtype float32\n"
    << "byte_order little\n"
    << "flatten row,col,channel\n"
    << "input " << config.input_height << ' ' << config.input_width << ' '
    << config.input_channels << '\n'
    << "leaky_slope " << FloatToString(config.leaky_slope) << '\n'
    << "embedding_dim " << config.embedding_dim() << '\n'
    << "layers " << config.layers.size() << '\n';
  for (const LayerSpec& spec : config.layers) {
    if (spec.kind == LayerKind::kConv2D) {
      m << "layer conv2d filters=" << spec.filters << " stride=" << spec.stride_h
        << ',' << spec.stride_w << " kernel=" << spec.kernel_h << ','
        << spec.kernel_w << " padding="
        << (spec.padding == Padding::kSame ? "same" : "valid");
    } else {
      m << "layer dense units=" << spec.filters;
    }
    m << " activation=" << ActivationName(spec.activation) << '\n';
  }
  m << "tensors " << shapes.size() << '\n';
  for (std::size_t i = 0; i < shapes.size(); ++i) {
    m << "tensor layer" << i / 2 << (i % 2 == 0 ? ".kernel " : ".bias ")
      << JoinDims(shapes[i]) << '\n';
  }
  m << "end\n";
  const std::string manifest = std::move(m).str();

  std::string out(kWeightsMagic);
  AppendU32(out, static_cast<std::uint32_t>(manifest.size()));
  out += manifest;
  out.reserve(out.size() + weights.ParameterCount() * 4);
  for (const auto& t : weights.tensors) {
    for (float v : t) AppendU32(out, std::bit_cast<std::uint32_t>(v));
  }
  return out;
}

EncoderWeights DeserializeWeights(std::string_view bytes) {
  if (bytes.size() < 8 || bytes.substr(0, 4) != kWeightsMagic) {
    FormatError("bad magic; not a TSW1 weight file");
  }
  const std::uint32_t manifest_size = ReadU32(bytes, 4);
  if (bytes.size() - 8 < manifest_size) FormatError("truncated manifest");
  std::istringstream m{std::string(bytes.substr(8, manifest_size))};

  EncoderConfig config;
  config.layers.clear();
  std::vector<std::vector<int>> declared;
  std::size_t layer_count = 0, tensor_count = 0;
  bool ended = false;
  for (std::string line; std::getline(m, line);) {
    const auto tok = Tokens(line);
    if (tok.empty()) continue;
    const std::string& key = tok[0];
    if (key == "end") {
      ended = true;
      break;
    } else if (key == "format") {
      if (tok.size() != 2 || tok[1] != "TSW1") FormatError("bad format line");
    } else if (key == "dtype") {
      if (tok.size() != 2 || tok[1] != "float32") FormatError("unsupported dtype");
    } else if (key == "byte_order") {
      if (tok.size() != 2 || tok[1] != "little") FormatError("unsupported byte order");
    } else if (key == "flatten") {
      if (tok.size() != 2 || tok[1] != "row,col,channel") {
        FormatError("unsupported flatten order");
      }
    } else if (key == "input") {
      if (tok.size() != 4) FormatError("bad input line");
      config.input_height = ParseInt(tok[1]);
      config.input_width = ParseInt(tok[2]);
      config.input_channels = ParseInt(tok[3]);
    } else if (key == "leaky_slope") {
      if (tok.size() != 2) FormatError("bad leaky_slope line");
      float v = 0;
      const auto r = std::from_chars(tok[1].data(), tok[1].data() + tok[1].size(), v);
      if (r.ec != std::errc()) FormatError("bad leaky_slope");
      config.leaky_slope = v;
    } else if (key == "embedding_dim") {
      // Derived from the layer list; checked below.
    } else if (key == "layers") {
      if (tok.size() != 2) FormatError("bad layers line");
      layer_count = static_cast<std::size_t>(ParseInt(tok[1]));
    } else if (key == "layer") {
      if (tok.size() < 2) FormatError("bad layer line");
      const Activation act = ParseActivation(Field(tok, "activation"));
      if (tok[1] == "conv2d") {
        const auto [sh, sw] = ParsePair(Field(tok, "stride"));
        const auto [kh, kw] = ParsePair(Field(tok, "kernel"));
        const std::string pad = Field(tok, "padding");
        if (pad != "same" && pad != "valid") FormatError("bad padding");
        config.layers.push_back(LayerSpec::Conv(
            ParseInt(Field(tok, "filters")), sh, sw, kh, kw,
            pad == "same" ? Padding::kSame : Padding::kValid, act));
      } else if (tok[1] == "dense") {
        config.layers.push_back(
            LayerSpec::Dense(ParseInt(Field(tok, "units")), act));
      } else {
        FormatError("unknown layer kind '" + tok[1] + "'");
      }
    } else if (key == "tensors") {
      if (tok.size() != 2) FormatError("bad tensors line");
      tensor_count = static_cast<std::size_t>(ParseInt(tok[1]));
    } else if (key == "tensor") {
      if (tok.size() != 3) FormatError("bad tensor line");
      std::vector<int> dims;
      std::string_view rest = tok[2];
      while (!rest.empty()) {
        const auto comma = rest.find(',');
        dims.push_back(ParseInt(rest.substr(0, comma)));
        if (comma == std::string_view::npos) break;
        rest.remove_prefix(comma + 1);
      }
      declared.push_back(std::move(dims));
    } else {
      FormatError("unknown manifest key '" + key + "'");
    }
  }
  if (!ended) FormatError("manifest missing 'end'");
  if (config.layers.size() != layer_count) FormatError("layer count mismatch");
  if (declared.size() != tensor_count) FormatError("tensor count mismatch");

  std::vector<std::vector<int>> expected;
  try {
    expected = ParameterShapes(config);
  } catch (const Error& e) {
    FormatError(std::string("inconsistent layer specs: ") + e.what());
  }
  if (expected != declared) FormatError("tensor shapes disagree with layers");

  EncoderWeights weights;
  weights.config = config;
  std::size_t offset = 8 + manifest_size;
  for (const auto& dims : declared) {
    const std::size_t n = Product(dims);
    if ((bytes.size() - offset) / 4 < n) FormatError("truncated tensor data");
    std::vector<float> t(n);
    for (std::size_t i = 0; i < n; ++i, offset += 4) {
      t[i] = std::bit_cast<float>(ReadU32(bytes, offset));
      if (!std::isfinite(t[i])) FormatError("non-finite weight");
    }
    weights.tensors.push_back(std::move(t));
  }
  if (offset != bytes.size()) FormatError("trailing bytes after tensors");
  return weights;
}

void SaveWeights(const EncoderWeights& weights,
                 const std::filesystem::path& path) {
  AtomicWriteFile(path, SerializeWeights(weights));
}

EncoderWeights LoadWeights(const std::filesystem::path& path) {
  return DeserializeWeights(ReadFileBytes(path));
}

std::string WeightsFingerprint(const EncoderWeights& weights) {
  return Sha256Hex(SerializeWeights(weights));
}

template struct EncoderParams<float>;
template struct EncoderParams<double>;
template class EncoderNet<float>;
template class EncoderNet<double>;
template EncoderParams<float> InitWeights<float>(const EncoderConfig&, std::uint64_t);
template EncoderParams<double> InitWeights<double>(const EncoderConfig&, std::uint64_t);
template EncoderParams<float> ZerosLike<float>(const EncoderParams<float>&);
template EncoderParams<double> ZerosLike<double>(const EncoderParams<double>&);

}  // namespace typotrace
