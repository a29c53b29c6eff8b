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

#include <string>
#include <vector>

#include "themekit/corpus.h"

namespace themekit {

enum class DecisionStatus {
  ok,
  rejected_no_evidence,   // dialogue produced no usable scores
  rejected_close_scores,  // rejection rule fired (top two scores too close)
};

std::string to_string(DecisionStatus status);
DecisionStatus decision_status_from_string(std::string_view s);

/// Outcome of one classifier on one dialogue. `themes` is sorted by
/// theme index (= name order) and empty exactly when status != ok.
struct Decision {
  std::vector<ThemeIndex> themes;
  DecisionStatus status = DecisionStatus::ok;

  bool rejected() const { return status != DecisionStatus::ok; }
  bool operator==(const Decision&) const = default;
};

}  // namespace themekit
