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

#include <filesystem>
#include <string>
#include <vector>

#include "themekit/corpus.h"
#include "themekit/decision.h"
#include "themekit/metrics.h"

namespace themekit {

/// One classified dialogue: id, per-theme scores (cosine scores or
/// dominant-density masses), the hypothesized theme set, and a status.
struct HypothesisRecord {
  std::string id;
  std::vector<double> scores;
  Decision decision;
};

/// A classification output file. Records are kept id-sorted; the header
/// carries the method name, the split and the corpus fingerprint so
/// evaluation can detect mismatched inputs.
struct HypothesisFile {
  std::string method;
  Split split = Split::test;
  std::uint64_t corpus_fp = 0;
  ThemeInventory themes;
  std::vector<HypothesisRecord> records;
};

void save_hypotheses(const HypothesisFile& file, const std::filesystem::path& path);
HypothesisFile load_hypotheses(const std::filesystem::path& path);

/// Hypotheses map for evaluate(): rejected records become rejected entries.
std::map<std::string, Hypothesis> hypotheses_for_eval(const HypothesisFile& file);

/// Writes report.txt (metric rows by method columns), report.kv
/// (machine-readable key-value pairs) and one breakdown_<method>.csv per
/// method into out_dir.
void write_eval_reports(
    const std::vector<std::pair<std::string, EvalReport>>& reports,
    const ThemeInventory& themes, const std::filesystem::path& out_dir);

}  // namespace themekit
