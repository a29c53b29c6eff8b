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
#include <filesystem>
#include <span>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "themekit/corpus.h"

namespace themekit {

enum class FeatureKind : std::uint8_t { unigram, bigram };

/// A surface feature: a single word, or an ordered word pair whose
/// positions differ by at most two (gap = number of intervening words,
/// 0 or 1).
struct FeatureId {
  FeatureKind kind = FeatureKind::unigram;
  std::string word1;
  std::string word2;  // empty for unigrams
  std::uint8_t gap = 0;

  static FeatureId unigram(std::string word);
  static FeatureId bigram(std::string first, std::string second, std::uint8_t gap);

  bool operator==(const FeatureId&) const = default;

  // Lexicographic order (kind, word1, word2, gap); this is the record
  // order of the feature-space file.
  friend bool operator<(const FeatureId& a, const FeatureId& b) {
    return std::tie(a.kind, a.word1, a.word2, a.gap) <
           std::tie(b.kind, b.word1, b.word2, b.gap);
  }
};

struct FeatureIdHash {
  std::size_t operator()(const FeatureId& f) const;
};

/// One occurrence of a feature in a dialogue, with its anchor positions
/// (1-based). Unigrams anchor at a single position (second == first).
struct FeatureOccurrence {
  FeatureId id;
  std::uint32_t first_pos = 0;
  std::uint32_t second_pos = 0;
};

/// Enumerates every unigram, adjacent bigram and gap-1 bigram occurrence.
/// A dialogue of n tokens yields exactly n + max(0,n-1) + max(0,n-2)
/// occurrences.
std::vector<FeatureOccurrence> extract_features(const Dialogue& dialogue);

/// Gini purity of a feature's per-theme document frequencies:
/// sum over themes of (df_c/df_T)^2. Computed from integer sums so the
/// single-class and uniform cases are exact. Throws when df_T == 0.
double gini(std::span<const std::uint32_t> df_c, std::uint32_t df_T);

/// Inverse document frequency ln(N/df_T). Requires 1 <= df_T <= N.
double idf(std::uint32_t df_T, std::uint32_t train_size);

/// Per-theme feature weight df_c * idf^2 * G^2.
double theme_weight(std::uint32_t df_c, double idf_value, double gini_value);

struct FeatureStats {
  std::uint32_t df_train = 0;          // dialogues of the train set containing t
  std::vector<std::uint32_t> df_theme; // per-theme document frequency
  double idf = 0.0;
  double gini = 0.0;
  std::vector<double> weight;          // w_c per theme

  bool operator==(const FeatureStats&) const = default;
};

/// The reduced feature set V with all train-side statistics. Immutable
/// once built; safe to share across threads.
struct FeatureSpace {
  ThemeInventory themes;
  double min_gini = 0.0;
  std::uint32_t min_df = 1;
  std::uint32_t train_size = 0;
  std::unordered_map<FeatureId, FeatureStats, FeatureIdHash> selected;
  std::vector<double> theme_norms;  // L2 norm of each theme's weight column

  const FeatureStats* find(const FeatureId& id) const {
    auto it = selected.find(id);
    return it == selected.end() ? nullptr : &it->second;
  }
};

struct SelectionSummary {
  std::size_t lexicon_size = 0;     // distinct unigrams in train
  std::size_t attested = 0;         // distinct features before selection
  std::size_t selected = 0;
};

/// Counts document frequencies over the train split and keeps features
/// with gini >= min_gini and df_train >= min_df. Throws when the train
/// split is empty or when selection leaves some theme with an all-zero
/// weight column.
FeatureSpace select_features(const Corpus& corpus, double min_gini,
                             std::uint32_t min_df,
                             SelectionSummary* summary = nullptr);

/// Flat-file persistence. Records are sorted by FeatureId, so two files
/// built from the same corpus are byte-identical and diffable. Derived
/// quantities (idf, gini, weights) are recomputed on load.
void save_feature_space(const FeatureSpace& space, const std::filesystem::path& path);
FeatureSpace load_feature_space(const std::filesystem::path& path);

}  // namespace themekit
