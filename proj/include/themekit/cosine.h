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
#include <unordered_map>
#include <vector>

#include "themekit/decision.h"
#include "themekit/features.h"

namespace themekit {

/// tf*idf weights of a dialogue over the selected feature set.
struct DialogueVector {
  std::unordered_map<FeatureId, double, FeatureIdHash> weights;
  double norm = 0.0;  // L2 norm; 0 means "no evidence"
};

DialogueVector dialogue_vector(const Dialogue& dialogue, const FeatureSpace& space);

/// Weight of one feature in one dialogue: occurrence count times idf.
/// Zero when the feature is unselected or absent.
double dialogue_weight(const FeatureId& id, const Dialogue& dialogue,
                       const FeatureSpace& space);

/// Decision thresholds of the cosine rule: a theme is kept when its score
/// reaches rho times the best score and v times the score mass.
struct CosineParams {
  double rho = 0.69;
  double v = 0.16;
};

/// Per-theme cosine scores for one dialogue. Scores live in [0,1];
/// `no_evidence` flags a dialogue whose vector is zero (every score 0).
struct ScoreVector {
  std::vector<double> score;
  bool no_evidence = false;
};

/// Cosine between the dialogue vector and one theme's weight column.
double cosine_score(const DialogueVector& dialogue, const FeatureSpace& space,
                    ThemeIndex theme);

ScoreVector cosine_scores(const Dialogue& dialogue, const FeatureSpace& space);

/// Applies the two-threshold rule to precomputed scores. The best-scoring
/// theme (ties broken by name order) is always kept; further themes need
/// a positive score passing both thresholds. A score vector with no
/// positive entry is rejected as "no evidence".
Decision decide_cosine(const ScoreVector& scores, const CosineParams& params);

Decision classify_cosine(const Dialogue& dialogue, const FeatureSpace& space,
                         const CosineParams& params);

/// Threshold grid used by the tuners: every multiple of `step` below 1,
/// plus 1 itself. step must lie in (0, 0.5].
std::vector<double> param_grid(double step);

struct CosineTuneResult {
  CosineParams params;
  double objective = 0.0;           // summed subset F-score at the optimum
  std::size_t grid_points = 0;      // number of (rho, v) pairs evaluated
};

/// Exhaustive grid search for (rho, v) maximizing the summed F-score over
/// the dev subsets; ties resolve toward the largest rho, then the largest
/// v, so the result does not depend on evaluation order.
CosineTuneResult tune_cosine(const Corpus& corpus,
                             const std::vector<std::vector<std::string>>& subsets,
                             const FeatureSpace& space, double grid_step);

/// Key-value persistence for tuned parameters (includes provenance:
/// grid, seed, subset shape, dev fingerprint).
struct StoredCosineParams {
  CosineParams params;
  double grid_step = 0.01;
  std::uint64_t seed = 0;
  std::size_t subset_count = 0;
  std::size_t subset_size = 0;
  std::uint64_t dev_fingerprint = 0;
  double objective = 0.0;
};

void save_cosine_params(const StoredCosineParams& stored,
                        const std::filesystem::path& path);
StoredCosineParams load_cosine_params(const std::filesystem::path& path);

}  // namespace themekit
