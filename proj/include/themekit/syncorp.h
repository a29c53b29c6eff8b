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
#include <string>
#include <string_view>
#include <vector>

#include "themekit/corpus.h"

namespace themekit {

/// How multiple planted themes share a dialogue.
enum class MixingMode {
  disjoint_segments,  // one contiguous block per theme
  interleaved,        // theme picked at random per signal slot
  co_mentioned,       // themes alternate on adjacent signal slots
};

std::string to_string(MixingMode mode);
MixingMode mixing_mode_from_string(std::string_view s);

/// Recipe for a synthetic labelled corpus: per-theme signal vocabularies
/// (pairwise disjoint), a shared filler vocabulary, length and theme-count
/// distributions, a mixing mode, and a token-replacement noise rate that
/// imitates transcription errors. Generation is a pure function of the
/// spec (including the seed).
struct GenSpec {
  std::vector<std::string> themes;
  std::vector<std::vector<std::string>> signal_vocab;  // per theme
  std::vector<std::string> filler_vocab;

  std::uint32_t train_size = 884;
  std::uint32_t dev_size = 196;
  std::uint32_t test_size = 578;

  std::uint32_t min_length = 60;
  std::uint32_t max_length = 140;

  /// theme_count_probs[k] is the probability of k+1 themes per dev/test
  /// dialogue (train is always mono-label).
  std::vector<double> theme_count_probs = {0.6, 0.4};

  MixingMode mixing = MixingMode::disjoint_segments;
  double signal_fraction = 0.35;  // fraction of positions carrying a signal word
  double noise = 0.0;             // P(signal token replaced by a random filler)
  std::uint64_t seed = 42;

  /// The seven default themes with generated vocabularies of the given
  /// sizes ("<theme>_s00"... signals, "f000"... fillers).
  static GenSpec defaults(std::size_t signal_vocab_size = 25,
                          std::size_t filler_vocab_size = 300);

  /// Replaces themes and regenerates the vocabularies.
  void set_themes(const std::vector<std::string>& names,
                  std::size_t signal_vocab_size, std::size_t filler_vocab_size);

  void validate() const;  // throws Error on an inconsistent spec
};

Corpus generate(const GenSpec& spec);

}  // namespace themekit
