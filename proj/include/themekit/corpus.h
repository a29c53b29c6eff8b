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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "themekit/util.h"

namespace themekit {

enum class Split { train, dev, test };

std::string to_string(Split split);
Split split_from_string(std::string_view s);  // throws Error on unknown value

using ThemeIndex = std::uint32_t;

/// Closed inventory of themes a corpus may use. Names are case-normalized,
/// unique, non-empty and stored sorted, so a ThemeIndex order is also
/// name order (the tie-break order used by both classifiers).
class ThemeInventory {
 public:
  ThemeInventory() = default;
  static ThemeInventory from_names(const std::vector<std::string>& names);

  const std::vector<std::string>& names() const { return names_; }
  const std::string& name(ThemeIndex i) const { return names_.at(i); }
  std::size_t size() const { return names_.size(); }
  std::optional<ThemeIndex> find(std::string_view name) const;

  bool operator==(const ThemeInventory&) const = default;

  /// The seven-theme inventory of the customer-care application this
  /// library was built around; used as the generator default.
  static const std::vector<std::string>& default_theme_names();

 private:
  std::vector<std::string> names_;  // sorted
};

/// One transcribed conversation: an ordered stream of normalized tokens
/// (positions are 1-based in all interfaces) plus its gold theme labels.
struct Dialogue {
  std::string id;
  Split split = Split::train;
  std::vector<std::string> tokens;
  std::vector<ThemeIndex> labels;  // sorted, unique, non-empty

  std::size_t length() const { return tokens.size(); }
  bool operator==(const Dialogue&) const = default;
};

struct Corpus {
  ThemeInventory themes;
  std::vector<Dialogue> dialogues;

  /// Indices (into dialogues) of all dialogues in the given split,
  /// in file order.
  std::vector<std::size_t> indices_of(Split split) const;

  const Dialogue* find(std::string_view id) const;

  bool operator==(const Corpus&) const = default;
};

/// Lower-cases (ASCII + Latin-1 letters), strips surrounding punctuation
/// and whitespace. Interior punctuation is kept ("la-bas," -> "la-bas").
/// Returns "" when nothing remains; callers drop such tokens. Total:
/// never throws, invalid UTF-8 bytes pass through untouched.
std::string normalize_token(std::string_view raw);

/// Whitespace-splits a transcript and normalizes every token, dropping
/// tokens that normalize to nothing.
std::vector<std::string> tokenize(std::string_view text);

/// Reads a corpus file (JSON Lines; see README for the schema). Validates
/// every invariant: known labels, unique ids, non-empty transcripts, and
/// mono-label train dialogues. Errors carry the offending line number.
Corpus load_corpus(const std::filesystem::path& path);

void save_corpus(const Corpus& corpus, const std::filesystem::path& path);

/// Canonical serialization of the corpus (byte-identical to the saved file).
std::string corpus_to_string(const Corpus& corpus);

/// FNV-1a hash of the canonical serialization; embedded in output files so
/// downstream commands can detect mismatched inputs.
std::uint64_t corpus_fingerprint(const Corpus& corpus);

/// Draws k subsets of `size` dev dialogues, sampled without replacement
/// within a subset and independently across subsets. Each subset carries
/// the dev set's single/multi-label proportion to the nearest achievable
/// integer. Returned id lists are sorted; the whole result is a pure
/// function of (corpus, k, size, seed).
std::vector<std::vector<std::string>> sample_dev_subsets(
    const Corpus& corpus, std::size_t k, std::size_t size, std::uint64_t seed);

}  // namespace themekit
