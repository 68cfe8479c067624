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

#ifndef TYPOTRACE_UTIL_H_
#define TYPOTRACE_UTIL_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <random>
#include <string>
#include <string_view>

namespace typotrace {

// Deterministic random source. Built on mt19937_64 (whose output sequence is
// fixed by the standard) with hand-written distributions, so streams are
// identical across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t NextU64() { return engine_(); }
  // Uniform in [0, 1).
  double Uniform();
  // Uniform in [lo, hi].
  double Uniform(double lo, double hi);
  // Uniform integer in [0, n). n must be positive.
  std::size_t UniformIndex(std::size_t n);

  template <typename It>
  void Shuffle(It first, It last) {
    const auto n = static_cast<std::size_t>(last - first);
    for (std::size_t i = n; i > 1; --i) {
      std::swap(first[i - 1], first[UniformIndex(i)]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

std::uint64_t SplitMix64(std::uint64_t x);
// Seeds derived from a parent seed and a key (string or counter).
std::uint64_t DeriveSeed(std::uint64_t seed, std::string_view key);
std::uint64_t DeriveSeed(std::uint64_t seed, std::uint64_t index);

std::string Sha256Hex(std::string_view bytes);
std::string FileSha256Hex(const std::filesystem::path& path);

std::string ReadFileBytes(const std::filesystem::path& path);
// Writes to a temporary sibling and renames over `path`.
void AtomicWriteFile(const std::filesystem::path& path, std::string_view bytes);

// Runs fn(i) for i in [0, n) on up to `threads` workers using a static
// contiguous partition. Callers write results by index, so output order never
// depends on the thread count. The first exception thrown is rethrown.
void ParallelFor(std::size_t n, int threads,
                 const std::function<void(std::size_t)>& fn);

}  // namespace typotrace

#endif  // TYPOTRACE_UTIL_H_
