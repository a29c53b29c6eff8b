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

#include <map>
#include <span>
#include <string>
#include <vector>

#include "themekit/corpus.h"
#include "themekit/decision.h"

namespace themekit {

/// A hypothesis to evaluate. Rejected (or empty) hypotheses are excluded
/// from every average and reported separately.
struct Hypothesis {
  std::vector<ThemeIndex> themes;  // sorted
  bool rejected = false;
};

/// Per-dialogue contribution terms: recall |H∩L|/|L|, precision |H∩L|/|H|,
/// accuracy |H∩L|/|H∪L|. Accuracy never exceeds the other two.
struct MetricTerms {
  double recall = 0.0;
  double precision = 0.0;
  double accuracy = 0.0;
  std::size_t n_correct = 0;
};

MetricTerms metric_terms_from_counts(std::size_t n_correct, std::size_t gold_size,
                                     std::size_t hyp_size);

/// gold and hyp must be sorted.
MetricTerms metric_terms(std::span<const ThemeIndex> gold,
                         std::span<const ThemeIndex> hyp);

/// Corpus F-score from corpus P and R; 0 when both vanish.
double fscore_from(double precision, double recall);

struct DialogueEval {
  std::string id;
  std::vector<ThemeIndex> gold;
  std::vector<ThemeIndex> hypothesis;
  std::size_t n_correct = 0;
  MetricTerms terms;
  bool rejected = false;
};

struct EvalReport {
  double recall = 0.0;
  double precision = 0.0;
  double fscore = 0.0;
  double accuracy = 0.0;
  std::size_t corpus_size = 0;  // dialogues submitted for evaluation
  std::size_t evaluated = 0;    // retained (non-rejected)
  std::size_t rejected = 0;
  std::vector<DialogueEval> breakdown;  // id-sorted
};

/// Averages the per-dialogue terms over all retained hypotheses and
/// derives the corpus F-score. Hypotheses are keyed by dialogue id;
/// every id must exist in the gold corpus. Throws on an empty input map.
EvalReport evaluate(const Corpus& gold,
                    const std::map<std::string, Hypothesis>& hypotheses);

/// Rejection rule on raw scores: reject when second-best/best >= 1-margin
/// (with best > 0), or when no score is positive. margin in [0,1];
/// margin 0 rejects exact ties only.
bool reject_close_scores(std::span<const double> scores, double margin);

/// Picks the margin whose rejection rate on the given dev score vectors
/// is closest to (at least) target_rate. Returns a margin in [0,1].
double tune_rejection_margin(const std::vector<std::vector<double>>& dev_scores,
                             double target_rate);

}  // namespace themekit
