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

#include "themekit/cosine.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>

#include "themekit/metrics.h"
#include "themekit/util.h"

namespace themekit {

DialogueVector dialogue_vector(const Dialogue& dialogue, const FeatureSpace& space) {
  std::unordered_map<FeatureId, std::uint32_t, FeatureIdHash> tf;
  for (auto& occ : extract_features(dialogue)) ++tf[std::move(occ.id)];

  DialogueVector v;
  double norm_sq = 0.0;
  for (auto& [fid, count] : tf) {
    const FeatureStats* stats = space.find(fid);
    if (!stats || stats->idf == 0.0) continue;
    double w = static_cast<double>(count) * stats->idf;
    norm_sq += w * w;
    v.weights.emplace(fid, w);
  }
  v.norm = std::sqrt(norm_sq);
  return v;
}

double dialogue_weight(const FeatureId& id, const Dialogue& dialogue,
                       const FeatureSpace& space) {
  const FeatureStats* stats = space.find(id);
  if (!stats) return 0.0;
  std::uint32_t tf = 0;
  for (const auto& occ : extract_features(dialogue)) {
    if (occ.id == id) ++tf;
  }
  return static_cast<double>(tf) * stats->idf;
}

double cosine_score(const DialogueVector& dialogue, const FeatureSpace& space,
                    ThemeIndex theme) {
  if (dialogue.norm == 0.0) return 0.0;
  double dot = 0.0;
  for (const auto& [fid, wd] : dialogue.weights) {
    const FeatureStats* stats = space.find(fid);
    dot += wd * stats->weight[theme];
  }
  double sc = dot / (dialogue.norm * space.theme_norms[theme]);
  return std::clamp(sc, 0.0, 1.0);
}

ScoreVector cosine_scores(const Dialogue& dialogue, const FeatureSpace& space) {
  const std::size_t n_themes = space.themes.size();
  ScoreVector out;
  out.score.assign(n_themes, 0.0);

  DialogueVector v = dialogue_vector(dialogue, space);
  if (v.norm == 0.0) {
    out.no_evidence = true;
    return out;
  }

  std::vector<double> dots(n_themes, 0.0);
  for (const auto& [fid, wd] : v.weights) {
    const FeatureStats* stats = space.find(fid);
    for (std::size_t t = 0; t < n_themes; ++t) {
      dots[t] += wd * stats->weight[t];
    }
  }
  for (std::size_t t = 0; t < n_themes; ++t) {
    out.score[t] = std::clamp(dots[t] / (v.norm * space.theme_norms[t]), 0.0, 1.0);
  }
  return out;
}

namespace {

// Shared by decide_cosine and the tuner hot loop; appends into `out`.
void decide_cosine_into(std::span<const double> scores, bool no_evidence,
                        const CosineParams& params, std::vector<ThemeIndex>& out,
                        DecisionStatus& status) {
  out.clear();
  double smax = 0.0;
  std::size_t best = 0;
  for (std::size_t t = 0; t < scores.size(); ++t) {
    if (scores[t] > smax) {
      smax = scores[t];
      best = t;
    }
  }
  if (no_evidence || smax <= 0.0) {
    status = DecisionStatus::rejected_no_evidence;
    return;
  }
  double ssum = 0.0;
  for (double s : scores) ssum += s;

  double rho_bar = params.rho * smax;
  double v_bar = params.v * ssum;
  for (std::size_t t = 0; t < scores.size(); ++t) {
    if (t == best ||
        (scores[t] > 0.0 && scores[t] >= rho_bar && scores[t] >= v_bar)) {
      out.push_back(static_cast<ThemeIndex>(t));
    }
  }
  status = DecisionStatus::ok;
}

}  // namespace

Decision decide_cosine(const ScoreVector& scores, const CosineParams& params) {
  if (params.rho < 0.0 || params.rho > 1.0 || params.v < 0.0 || params.v > 1.0) {
    throw Error("cosine parameters must lie in [0,1]");
  }
  Decision d;
  decide_cosine_into(scores.score, scores.no_evidence, params, d.themes, d.status);
  return d;
}

Decision classify_cosine(const Dialogue& dialogue, const FeatureSpace& space,
                         const CosineParams& params) {
  return decide_cosine(cosine_scores(dialogue, space), params);
}

std::vector<double> param_grid(double step) {
  if (!(step > 0.0) || step > 0.5) throw Error("grid step must lie in (0, 0.5]");
  std::vector<double> grid;
  for (int i = 0;; ++i) {
    double x = i * step;
    if (!(x < 1.0)) break;
    grid.push_back(x);
  }
  grid.push_back(1.0);
  return grid;
}

CosineTuneResult tune_cosine(const Corpus& corpus,
                             const std::vector<std::vector<std::string>>& subsets,
                             const FeatureSpace& space, double grid_step) {
  if (subsets.empty()) throw Error("tune_cosine: no dev subsets");

  // Score vectors do not depend on (rho, v): compute once per distinct id.
  std::map<std::string, const Dialogue*> by_id;
  for (const auto& subset : subsets) {
    for (const auto& id : subset) {
      if (by_id.count(id)) continue;
      const Dialogue* d = corpus.find(id);
      if (!d) throw Error("tune_cosine: unknown dialogue id \"" + id + "\"");
      by_id.emplace(id, d);
    }
  }
  std::vector<const Dialogue*> dialogues;
  dialogues.reserve(by_id.size());
  for (const auto& [id, d] : by_id) dialogues.push_back(d);

  std::vector<ScoreVector> scores(dialogues.size());
  parallel_for(dialogues.size(), [&](std::size_t i) {
    scores[i] = cosine_scores(*dialogues[i], space);
  });
  std::map<std::string, std::size_t> score_index;
  for (std::size_t i = 0; i < dialogues.size(); ++i) {
    score_index.emplace(dialogues[i]->id, i);
  }

  struct Entry {
    const ScoreVector* scores;
    const std::vector<ThemeIndex>* gold;
  };
  std::vector<std::vector<Entry>> subset_entries;
  subset_entries.reserve(subsets.size());
  for (const auto& subset : subsets) {
    std::vector<Entry> entries;
    entries.reserve(subset.size());
    for (const auto& id : subset) {
      std::size_t i = score_index.at(id);
      entries.push_back({&scores[i], &dialogues[i]->labels});
    }
    subset_entries.push_back(std::move(entries));
  }

  const std::vector<double> grid = param_grid(grid_step);

  struct Best {
    double objective = -1.0;
    double rho = 0.0;
    double v = 0.0;
  };
  std::vector<Best> row_best(grid.size());

  parallel_for(grid.size(), [&](std::size_t ri) {
    const double rho = grid[ri];
    Best best;
    std::vector<ThemeIndex> hyp;
    for (double v : grid) {
      CosineParams params{rho, v};
      double objective = 0.0;
      for (const auto& entries : subset_entries) {
        double r_sum = 0.0, p_sum = 0.0;
        std::size_t retained = 0;
        for (const Entry& e : entries) {
          DecisionStatus status;
          decide_cosine_into(e.scores->score, e.scores->no_evidence, params, hyp,
                             status);
          if (status != DecisionStatus::ok) continue;
          MetricTerms t = metric_terms(*e.gold, hyp);
          r_sum += t.recall;
          p_sum += t.precision;
          ++retained;
        }
        if (retained > 0) {
          double n = static_cast<double>(retained);
          objective += fscore_from(p_sum / n, r_sum / n);
        }
      }
      // v scans upward, so "later wins" on equal objective picks the
      // largest v within the row.
      if (objective > best.objective ||
          (objective == best.objective && v > best.v)) {
        best = {objective, rho, v};
      }
    }
    row_best[ri] = best;
  });

  Best overall;
  for (const Best& b : row_best) {
    if (b.objective > overall.objective ||
        (b.objective == overall.objective && b.rho > overall.rho)) {
      overall = b;
    }
  }

  CosineTuneResult result;
  result.params = {overall.rho, overall.v};
  result.objective = overall.objective;
  result.grid_points = grid.size() * grid.size();
  return result;
}

namespace {

constexpr const char* kParamsMagic = "themekit-params\tv1";

}  // namespace

void save_cosine_params(const StoredCosineParams& stored,
                        const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write params file " + path.string());
  out << kParamsMagic << '\n';
  out << "method\tcosine\n";
  out << "rho\t" << format_double(stored.params.rho) << '\n';
  out << "v\t" << format_double(stored.params.v) << '\n';
  out << "grid_step\t" << format_double(stored.grid_step) << '\n';
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

StoredCosineParams load_cosine_params(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open params file " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != kParamsMagic) {
    throw Error(path.string() + ": not a themekit params file");
  }
  StoredCosineParams stored;
  bool saw_method = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::size_t tab = line.find('\t');
    if (tab == std::string::npos) throw Error(path.string() + ": malformed line");
    std::string key = line.substr(0, tab);
    std::string value = line.substr(tab + 1);
    try {
      if (key == "method") {
        if (value != "cosine") {
          throw Error(path.string() + ": expected cosine params, found " + value);
        }
        saw_method = true;
      } else if (key == "rho") {
        stored.params.rho = std::stod(value);
      } else if (key == "v") {
        stored.params.v = std::stod(value);
      } else if (key == "grid_step") {
        stored.grid_step = std::stod(value);
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
