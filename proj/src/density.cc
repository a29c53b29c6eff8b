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

#include "themekit/density.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>

#include "themekit/cosine.h"
#include "themekit/metrics.h"
#include "themekit/util.h"

namespace themekit {

PositionContributions position_contributions(const Dialogue& dialogue,
                                             const FeatureSpace& space) {
  const std::size_t n = dialogue.length();
  const std::size_t n_themes = space.themes.size();
  PositionContributions out;
  out.w.assign(n_themes, std::vector<double>(n, 0.0));

  // Every occurrence contributes its theme weights at each anchor word.
  for (const auto& occ : extract_features(dialogue)) {
    const FeatureStats* stats = space.find(occ.id);
    if (!stats) continue;
    for (std::size_t t = 0; t < n_themes; ++t) {
      double w = stats->weight[t];
      if (w == 0.0) continue;
      out.w[t][occ.first_pos - 1] += w;
      if (occ.second_pos != occ.first_pos) out.w[t][occ.second_pos - 1] += w;
    }
  }
  for (std::size_t t = 0; t < n_themes; ++t) {
    double norm = space.theme_norms[t];
    for (double& x : out.w[t]) x /= norm;
  }
  return out;
}

double position_contribution(const Dialogue& dialogue, std::uint32_t pos,
                             ThemeIndex theme, const FeatureSpace& space) {
  if (pos < 1 || pos > dialogue.length()) {
    throw Error("position_contribution: position out of range");
  }
  double sum = 0.0;
  for (const auto& occ : extract_features(dialogue)) {
    if (occ.first_pos != pos && occ.second_pos != pos) continue;
    const FeatureStats* stats = space.find(occ.id);
    if (!stats) continue;
    sum += stats->weight[theme];
  }
  return sum / space.theme_norms[theme];
}

std::vector<double> thematic_density(std::span<const double> contributions,
                                     double lambda) {
  if (lambda < 1.0) throw Error("lambda must be >= 1");
  const std::size_t n = contributions.size();
  if (n == 0) throw Error("thematic_density: empty dialogue");

  std::vector<double> density(n);
  if (lambda == 1.0) {
    // Uniform decay: every position sees the plain mean.
    double sum = 0.0;
    for (double w : contributions) sum += w;
    std::fill(density.begin(), density.end(), sum / static_cast<double>(n));
  } else {
    const double r = 1.0 / lambda;
    // Forward pass: f[i] = sum_{j<=i} w_j r^(i-j); same recurrence with
    // w == 1 gives the denominator. Backward pass mirrors it; position i
    // then combines both sides, counting w_i once.
    std::vector<double> num(n), den(n);
    double fw = 0.0, fd = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      fw = contributions[i] + r * fw;
      fd = 1.0 + r * fd;
      num[i] = fw;
      den[i] = fd;
    }
    double bw = 0.0, bd = 0.0;
    for (std::size_t i = n; i-- > 0;) {
      bw = contributions[i] + r * bw;
      bd = 1.0 + r * bd;
      density[i] = (num[i] + bw - contributions[i]) / (den[i] + bd - 1.0);
    }
  }

  // The exact result is a convex combination of the contributions; keep
  // the computed one inside those bounds despite roundoff.
  double lo = contributions[0], hi = contributions[0];
  for (double w : contributions) {
    lo = std::min(lo, w);
    hi = std::max(hi, w);
  }
  for (double& d : density) d = std::clamp(d, lo, hi);
  return density;
}

Skeleton compute_skeleton(const Dialogue& dialogue, const FeatureSpace& space,
                          double lambda) {
  PositionContributions contribs = position_contributions(dialogue, space);
  Skeleton skeleton;
  skeleton.length = dialogue.length();
  skeleton.lambda = lambda;
  skeleton.density.reserve(contribs.w.size());
  for (const auto& row : contribs.w) {
    skeleton.density.push_back(thematic_density(row, lambda));
  }
  return skeleton;
}

DominanceSummary summarize_dominance(const Skeleton& skeleton) {
  const std::size_t n_themes = skeleton.density.size();
  const std::size_t n = skeleton.length;
  DominanceSummary s;
  s.mass.assign(n_themes, 0.0);
  s.dominant.assign(n_themes, false);

  for (std::size_t i = 0; i < n; ++i) {
    double best = 0.0;
    for (std::size_t t = 0; t < n_themes; ++t) {
      best = std::max(best, skeleton.density[t][i]);
    }
    if (best > 0.0) s.all_zero = false;
    s.total_mass += best;
    for (std::size_t t = 0; t < n_themes; ++t) {
      // Ties count for every tied theme; the total uses the max once.
      if (skeleton.density[t][i] >= best) {
        s.dominant[t] = true;
        s.mass[t] += skeleton.density[t][i];
      }
    }
  }
  return s;
}

namespace {

void decide_density_into(const DominanceSummary& s, double v,
                         std::vector<ThemeIndex>& out, DecisionStatus& status) {
  out.clear();
  if (s.all_zero) {
    status = DecisionStatus::rejected_no_evidence;
    return;
  }
  std::size_t best = 0;
  double best_mass = -1.0;
  for (std::size_t t = 0; t < s.mass.size(); ++t) {
    if (s.dominant[t] && s.mass[t] > best_mass) {
      best_mass = s.mass[t];
      best = t;
    }
  }
  double threshold = v * s.total_mass;
  for (std::size_t t = 0; t < s.mass.size(); ++t) {
    if (t == best || (s.dominant[t] && s.mass[t] >= threshold)) {
      out.push_back(static_cast<ThemeIndex>(t));
    }
  }
  status = DecisionStatus::ok;
}

}  // namespace

Decision classify_density(const Skeleton& skeleton, const DensityParams& params) {
  if (params.v < 0.0 || params.v > 1.0) throw Error("density v must lie in [0,1]");
  Decision d;
  decide_density_into(summarize_dominance(skeleton), params.v, d.themes, d.status);
  return d;
}

std::span<const double> default_lambda_grid() {
  static const double kGrid[] = {1.0, 1.02, 1.05, 1.1, 1.2, 1.5, 2.0, 2.8};
  return kGrid;
}

DensityTuneResult tune_density(const Corpus& corpus,
                               const std::vector<std::vector<std::string>>& subsets,
                               const FeatureSpace& space,
                               std::span<const double> lambda_grid,
                               double v_grid_step) {
  if (subsets.empty()) throw Error("tune_density: no dev subsets");
  if (lambda_grid.empty()) throw Error("tune_density: empty lambda grid");

  std::map<std::string, const Dialogue*> by_id;
  for (const auto& subset : subsets) {
    for (const auto& id : subset) {
      if (by_id.count(id)) continue;
      const Dialogue* d = corpus.find(id);
      if (!d) throw Error("tune_density: unknown dialogue id \"" + id + "\"");
      by_id.emplace(id, d);
    }
  }
  std::vector<const Dialogue*> dialogues;
  for (const auto& [id, d] : by_id) dialogues.push_back(d);

  // Contributions are lambda-independent; densities are not. Summaries
  // per (dialogue, lambda) are enough for every v.
  std::vector<PositionContributions> contribs(dialogues.size());
  parallel_for(dialogues.size(), [&](std::size_t i) {
    contribs[i] = position_contributions(*dialogues[i], space);
  });

  std::vector<std::vector<DominanceSummary>> summaries(
      lambda_grid.size(), std::vector<DominanceSummary>(dialogues.size()));
  for (std::size_t li = 0; li < lambda_grid.size(); ++li) {
    double lambda = lambda_grid[li];
    if (lambda < 1.0) throw Error("lambda must be >= 1");
    parallel_for(dialogues.size(), [&, li, lambda](std::size_t i) {
      Skeleton skeleton;
      skeleton.length = dialogues[i]->length();
      skeleton.lambda = lambda;
      for (const auto& row : contribs[i].w) {
        skeleton.density.push_back(thematic_density(row, lambda));
      }
      summaries[li][i] = summarize_dominance(skeleton);
    });
  }

  std::map<std::string, std::size_t> index_of;
  for (std::size_t i = 0; i < dialogues.size(); ++i) {
    index_of.emplace(dialogues[i]->id, i);
  }
  std::vector<std::vector<std::size_t>> subset_indices;
  for (const auto& subset : subsets) {
    std::vector<std::size_t> ix;
    ix.reserve(subset.size());
    for (const auto& id : subset) ix.push_back(index_of.at(id));
    subset_indices.push_back(std::move(ix));
  }

  const std::vector<double> v_grid = param_grid(v_grid_step);

  struct Best {
    double objective = -1.0;
    double lambda = 0.0;
    double v = 0.0;
  };
  std::vector<Best> row_best(lambda_grid.size());

  parallel_for(lambda_grid.size(), [&](std::size_t li) {
    Best best;
    std::vector<ThemeIndex> hyp;
    for (double v : v_grid) {
      double objective = 0.0;
      for (const auto& ix : subset_indices) {
        double r_sum = 0.0, p_sum = 0.0;
        std::size_t retained = 0;
        for (std::size_t i : ix) {
          DecisionStatus status;
          decide_density_into(summaries[li][i], v, hyp, status);
          if (status != DecisionStatus::ok) continue;
          MetricTerms t = metric_terms(dialogues[i]->labels, hyp);
          r_sum += t.recall;
          p_sum += t.precision;
          ++retained;
        }
        if (retained > 0) {
          double n = static_cast<double>(retained);
          objective += fscore_from(p_sum / n, r_sum / n);
        }
      }
      if (objective > best.objective ||
          (objective == best.objective && v > best.v)) {
        best = {objective, lambda_grid[li], v};
      }
    }
    row_best[li] = best;
  });

  Best overall;
  for (const Best& b : row_best) {
    if (b.objective > overall.objective ||
        (b.objective == overall.objective && b.lambda > overall.lambda)) {
      overall = b;
    }
  }

  DensityTuneResult result;
  result.params = {overall.lambda, overall.v};
  result.objective = overall.objective;
  result.grid_points = lambda_grid.size() * v_grid.size();
  return result;
}

void export_skeleton(const Skeleton& skeleton, const ThemeInventory& themes,
                     const std::filesystem::path& path) {
  if (skeleton.density.size() != themes.size()) {
    throw Error("export_skeleton: theme count mismatch");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write skeleton file " + path.string());
  out << "position";
  for (const auto& name : themes.names()) out << ',' << name;
  out << '\n';
  for (std::size_t i = 0; i < skeleton.length; ++i) {
    out << (i + 1);
    for (std::size_t t = 0; t < themes.size(); ++t) {
      out << ',' << format_double(skeleton.density[t][i], 6);
    }
    out << '\n';
  }
  if (!out) throw Error("error while writing skeleton file " + path.string());
}

namespace {

constexpr const char* kParamsMagic = "themekit-params\tv1";

}  // namespace

void save_density_params(const StoredDensityParams& stored,
                         const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write params file " + path.string());
  out << kParamsMagic << '\n';
  out << "method\tdensity\n";
  out << "lambda\t" << format_double(stored.params.lambda) << '\n';
  out << "v\t" << format_double(stored.params.v) << '\n';
  out << "lambda_grid\t";
  for (std::size_t i = 0; i < stored.lambda_grid.size(); ++i) {
    if (i) out << ',';
    out << format_double(stored.lambda_grid[i]);
  }
  out << '\n';
  out << "v_grid_step\t" << format_double(stored.v_grid_step) << '\n';
  out << "seed\t" << stored.seed << '\n';
  out << "subsets\t" << stored.subset_count << '\n';
  out << "subset_size\t" << stored.subset_size << '\n';
  char fp[17];
  std::snprintf(fp, sizeof(fp), "%016llx",
                static_cast<unsigned long long>(stored.dev_fingerprint));
  out << "dev_fingerprint\t" << fp << '\n';
  out << "objective\t" << format_double(stored.objective) << '\n';
  if (!out) throw Error("error while writing params file " + path.string());
}

StoredDensityParams load_density_params(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open params file " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != kParamsMagic) {
    throw Error(path.string() + ": not a themekit params file");
  }
  StoredDensityParams stored;
  bool saw_method = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::size_t tab = line.find('\t');
    if (tab == std::string::npos) throw Error(path.string() + ": malformed line");
    std::string key = line.substr(0, tab);
    std::string value = line.substr(tab + 1);
    try {
      if (key == "method") {
        if (value != "density") {
          throw Error(path.string() + ": expected density params, found " + value);
        }
        saw_method = true;
      } else if (key == "lambda") {
        stored.params.lambda = std::stod(value);
      } else if (key == "v") {
        stored.params.v = std::stod(value);
      } else if (key == "lambda_grid") {
        stored.lambda_grid.clear();
        std::size_t start = 0;
        while (start <= value.size()) {
          std::size_t comma = value.find(',', start);
          std::string item = value.substr(
              start, comma == std::string::npos ? std::string::npos : comma - start);
          if (!item.empty()) stored.lambda_grid.push_back(std::stod(item));
          if (comma == std::string::npos) break;
          start = comma + 1;
        }
      } else if (key == "v_grid_step") {
        stored.v_grid_step = std::stod(value);
      } else if (key == "seed") {
        stored.seed = std::stoull(value);
      } else if (key == "subsets") {
        stored.subset_count = std::stoul(value);
      } else if (key == "subset_size") {
        stored.subset_size = std::stoul(value);
      } else if (key == "dev_fingerprint") {
        stored.dev_fingerprint = std::stoull(value, nullptr, 16);
      } else if (key == "objective") {
        stored.objective = std::stod(value);
      }
    } catch (const Error&) {
      throw;
    } catch (const std::exception& e) {
      throw Error(path.string() + ": bad value for " + key + ": " + e.what());
    }
  }
  if (!saw_method) throw Error(path.string() + ": missing method field");
  return stored;
}

}  // namespace themekit
