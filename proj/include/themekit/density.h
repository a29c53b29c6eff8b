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
#include <vector>

#include "themekit/decision.h"
#include "themekit/features.h"

namespace themekit {

/// Per-position, per-theme contributions w_c(p_i): the normalized weight
/// mass of the word at position i plus every selected bigram covering it.
struct PositionContributions {
  std::vector<std::vector<double>> w;  // [theme][position], positions 0-based

  std::size_t length() const { return w.empty() ? 0 : w.front().size(); }
};

PositionContributions position_contributions(const Dialogue& dialogue,
                                             const FeatureSpace& space);

/// Contribution of position `pos` (1-based) to one theme.
double position_contribution(const Dialogue& dialogue, std::uint32_t pos,
                             ThemeIndex theme, const FeatureSpace& space);

/// Distance-decayed density: d(p_i) = sum_j w(p_j) lambda^-|i-j| /
/// sum_j lambda^-|i-j|. Computed with a forward/backward geometric
/// recurrence (O(n) per theme); results match the direct O(n^2) sum to
/// better than 1e-9 relative. lambda must be >= 1; lambda == 1 reduces to
/// the global mean, large lambda converges to w pointwise. Every output
/// is a convex combination of the inputs.
std::vector<double> thematic_density(std::span<const double> contributions,
                                     double lambda);

/// The positions-by-themes density matrix of one dialogue.
struct Skeleton {
  std::size_t length = 0;
  double lambda = 1.0;
  std::vector<std::vector<double>> density;  // [theme][position]
};

Skeleton compute_skeleton(const Dialogue& dialogue, const FeatureSpace& space,
                          double lambda);

struct DensityParams {
  double lambda = 1.05;
  double v = 0.16;
};

/// Per-theme dominance statistics of a skeleton: which themes dominate
/// somewhere, their summed density over dominated positions, and the
/// total dominant mass. classify_density and the tuner share this.
struct DominanceSummary {
  std::vector<double> mass;       // sum of d_c over positions where c dominates
  std::vector<bool> dominant;     // I_c nonempty
  double total_mass = 0.0;        // sum over positions of the max density
  bool all_zero = true;
};

DominanceSummary summarize_dominance(const Skeleton& skeleton);

/// Density decision rule: keep the theme with the largest dominant mass
/// (ties by name order) plus every theme that dominates somewhere and
/// whose dominant mass reaches v times the total dominant mass. An
/// all-zero skeleton is rejected as "no evidence".
Decision classify_density(const Skeleton& skeleton, const DensityParams& params);

/// Default lambda grid for tuning; contains the flat (1.0), mildly local
/// (1.05) and sharply local (2.8) regimes plus a few points between.
std::span<const double> default_lambda_grid();

struct DensityTuneResult {
  DensityParams params;
  double objective = 0.0;
  std::size_t grid_points = 0;
};

/// Exhaustive (lambda, v) search maximizing the summed subset F-score;
/// ties resolve toward the largest lambda, then the largest v.
DensityTuneResult tune_density(const Corpus& corpus,
                               const std::vector<std::vector<std::string>>& subsets,
                               const FeatureSpace& space,
                               std::span<const double> lambda_grid,
                               double v_grid_step);

/// CSV export, one row per position and one column per theme, densities
/// with 6 significant digits.
void export_skeleton(const Skeleton& skeleton, const ThemeInventory& themes,
                     const std::filesystem::path& path);

struct StoredDensityParams {
  DensityParams params;
  std::vector<double> lambda_grid;
  double v_grid_step = 0.01;
  std::uint64_t seed = 0;
  std::size_t subset_count = 0;
  std::size_t subset_size = 0;
  std::uint64_t dev_fingerprint = 0;
  double objective = 0.0;
};

void save_density_params(const StoredDensityParams& stored,
                         const std::filesystem::path& path);
StoredDensityParams load_density_params(const std::filesystem::path& path);

}  // namespace themekit
