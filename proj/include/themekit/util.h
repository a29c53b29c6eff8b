// Copyright 2026 The Themekit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace themekit {

/// Error type thrown by every fallible operation in the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// splitmix64 finalizer, used to derive independent per-stream seeds.
std::uint64_t mix_seed(std::uint64_t base, std::uint64_t stream);

/// FNV-1a 64-bit hash, used for content fingerprints in output files.
std::uint64_t fnv1a64(std::string_view bytes);

/// Deterministic RNG. All draws are fully specified by the standard
/// (mt19937_64 output, modulo reduction), so sequences are reproducible
/// across platforms, not just across runs.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  /// Uniform integer in [0, n). n must be > 0.
  std::size_t below(std::size_t n);

  /// Uniform double in [0, 1) with 53 random bits.
  double unit();

  /// In-place Fisher-Yates shuffle.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[below(i)]);
    }
  }

 private:
  std::mt19937_64 gen_;
};

/// Shortest representation that round-trips through a double.
std::string format_double(double x);

/// General ("%g"-style) formatting with the given significant digits.
std::string format_double(double x, int significant_digits);

/// Runs fn(i) for i in [0, n), possibly on multiple threads. The caller
/// must make iterations independent; results should be written to
/// index-addressed slots so that output order does not depend on the
/// schedule. Exceptions are collected and the first one is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace themekit
