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

#include "themekit/metrics.h"

#include <algorithm>
#include <cassert>
#include <cmath>

namespace themekit {

MetricTerms metric_terms_from_counts(std::size_t n_correct, std::size_t gold_size,
                                     std::size_t hyp_size) {
  MetricTerms t;
  t.n_correct = n_correct;
  t.recall = static_cast<double>(n_correct) / static_cast<double>(gold_size);
  t.precision = static_cast<double>(n_correct) / static_cast<double>(hyp_size);
  std::size_t union_size = gold_size + hyp_size - n_correct;
  t.accuracy = static_cast<double>(n_correct) / static_cast<double>(union_size);
  // Jaccard accuracy is the strictest of the three (same numerator,
  // largest denominator).
  assert(t.accuracy <= t.precision && t.accuracy <= t.recall);
  return t;
}

MetricTerms metric_terms(std::span<const ThemeIndex> gold,
                         std::span<const ThemeIndex> hyp) {
  if (gold.empty()) throw Error("metric_terms: empty gold label set");
  if (hyp.empty()) throw Error("metric_terms: empty hypothesis set");
  std::size_t n = 0;
  std::size_t i = 0, j = 0;
  while (i < gold.size() && j < hyp.size()) {
    if (gold[i] < hyp[j]) {
      ++i;
    } else if (hyp[j] < gold[i]) {
      ++j;
    } else {
      ++n;
      ++i;
      ++j;
    }
  }
  return metric_terms_from_counts(n, gold.size(), hyp.size());
}

double fscore_from(double precision, double recall) {
  double denom = precision + recall;
  if (denom == 0.0) return 0.0;
  return 2.0 * precision * recall / denom;
}

EvalReport evaluate(const Corpus& gold,
                    const std::map<std::string, Hypothesis>& hypotheses) {
  if (hypotheses.empty()) throw Error("evaluate: empty evaluation set");

  EvalReport report;
  report.corpus_size = hypotheses.size();
  report.breakdown.reserve(hypotheses.size());

  double r_sum = 0.0, p_sum = 0.0, a_sum = 0.0;
  for (const auto& [id, hyp] : hypotheses) {
    const Dialogue* d = gold.find(id);
    if (!d) throw Error("evaluate: unknown dialogue id \"" + id + "\"");

    DialogueEval row;
    row.id = id;
    row.gold = d->labels;
    row.hypothesis = hyp.themes;
    row.rejected = hyp.rejected || hyp.themes.empty();
    if (row.rejected) {
      ++report.rejected;
    } else {
      row.terms = metric_terms(d->labels, hyp.themes);
      row.n_correct = row.terms.n_correct;
      r_sum += row.terms.recall;
      p_sum += row.terms.precision;
      a_sum += row.terms.accuracy;
      ++report.evaluated;
    }
    report.breakdown.push_back(std::move(row));
  }

  if (report.evaluated > 0) {
    double n = static_cast<double>(report.evaluated);
    report.recall = r_sum / n;
    report.precision = p_sum / n;
    report.accuracy = a_sum / n;
    report.fscore = fscore_from(report.precision, report.recall);
  }
  return report;
}

bool reject_close_scores(std::span<const double> scores, double margin) {
  if (margin < 0.0 || margin > 1.0) throw Error("rejection margin must lie in [0,1]");
  double best = 0.0, second = 0.0;
  for (double s : scores) {
    if (s > best) {
      second = best;
      best = s;
    } else if (s > second) {
      second = s;
    }
  }
  if (best <= 0.0) return true;  // no evidence at all
  return second / best >= 1.0 - margin;
}

double tune_rejection_margin(const std::vector<std::vector<double>>& dev_scores,
                             double target_rate) {
  if (dev_scores.empty()) throw Error("tune_rejection_margin: no dev scores");
  if (target_rate < 0.0 || target_rate > 1.0) {
    throw Error("target rejection rate must lie in [0,1]");
  }

  // Ratio second/best per dialogue; all-zero dialogues are rejected at any
  // margin, so they use up part of the budget.
  std::vector<double> ratios;
  std::size_t always_rejected = 0;
  for (const auto& scores : dev_scores) {
    double best = 0.0, second = 0.0;
    for (double s : scores) {
      if (s > best) {
        second = best;
        best = s;
      } else if (s > second) {
        second = s;
      }
    }
    if (best <= 0.0) {
      ++always_rejected;
    } else {
      ratios.push_back(second / best);
    }
  }

  auto budget = static_cast<std::size_t>(
      std::llround(target_rate * static_cast<double>(dev_scores.size())));
  if (budget <= always_rejected || ratios.empty()) return 0.0;
  std::size_t k = budget - always_rejected;
  if (k > ratios.size()) k = ratios.size();

  std::sort(ratios.begin(), ratios.end(), std::greater<double>());
  // Reject every dialogue whose ratio reaches the k-th largest one.
  double threshold = ratios[k - 1];
  return std::clamp(1.0 - threshold, 0.0, 1.0);
}

}  // namespace themekit
