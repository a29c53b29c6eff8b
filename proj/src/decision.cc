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

#include "themekit/decision.h"

namespace themekit {

std::string to_string(DecisionStatus status) {
  switch (status) {
    case DecisionStatus::ok: return "ok";
    case DecisionStatus::rejected_no_evidence: return "rejected: no evidence";
    case DecisionStatus::rejected_close_scores: return "rejected: close scores";
  }
  throw Error("invalid decision status");
}

DecisionStatus decision_status_from_string(std::string_view s) {
  if (s == "ok") return DecisionStatus::ok;
  if (s == "rejected: no evidence") return DecisionStatus::rejected_no_evidence;
  if (s == "rejected: close scores") return DecisionStatus::rejected_close_scores;
  throw Error("unknown decision status \"" + std::string(s) + "\"");
}

}  // namespace themekit
