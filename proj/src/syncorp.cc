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

#include "themekit/syncorp.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_set>

namespace themekit {

std::string to_string(MixingMode mode) {
  switch (mode) {
    case MixingMode::disjoint_segments: return "disjoint-segments";
    case MixingMode::interleaved: return "interleaved";
    case MixingMode::co_mentioned: return "co-mentioned";
  }
  throw Error("invalid mixing mode");
}

MixingMode mixing_mode_from_string(std::string_view s) {
  if (s == "disjoint-segments") return MixingMode::disjoint_segments;
  if (s == "interleaved") return MixingMode::interleaved;
  if (s == "co-mentioned") return MixingMode::co_mentioned;
  throw Error("unknown mixing mode \"" + std::string(s) + "\"");
}

namespace {

std::string sanitize(const std::string& name) {
  std::string out;
  for (char c : name) {
    out.push_back(std::isalnum(static_cast<unsigned char>(c)) ? c : '_');
  }
  return out;
}

std::string zero_pad(std::size_t value, int width) {
  std::string s = std::to_string(value);
  while (static_cast<int>(s.size()) < width) s.insert(s.begin(), '0');
  return s;
}

}  // namespace

GenSpec GenSpec::defaults(std::size_t signal_vocab_size,
                          std::size_t filler_vocab_size) {
  GenSpec spec;
  spec.set_themes(ThemeInventory::default_theme_names(), signal_vocab_size,
                  filler_vocab_size);
  return spec;
}

void GenSpec::set_themes(const std::vector<std::string>& names,
                         std::size_t signal_vocab_size,
                         std::size_t filler_vocab_size) {
  themes = names;
  signal_vocab.clear();
  for (const auto& theme : themes) {
    std::vector<std::string> vocab;
    vocab.reserve(signal_vocab_size);
    std::string base = sanitize(theme);
    for (std::size_t i = 0; i < signal_vocab_size; ++i) {
      vocab.push_back(base + "_s" + zero_pad(i, 2));
    }
    signal_vocab.push_back(std::move(vocab));
  }
  filler_vocab.clear();
  for (std::size_t i = 0; i < filler_vocab_size; ++i) {
    filler_vocab.push_back("f" + zero_pad(i, 3));
  }
}

void GenSpec::validate() const {
  if (themes.size() < 2) throw Error("GenSpec: need at least 2 themes");
  if (signal_vocab.size() != themes.size()) {
    throw Error("GenSpec: one signal vocabulary per theme required");
  }
  std::unordered_set<std::string> seen;
  for (const auto& vocab : signal_vocab) {
    if (vocab.empty()) throw Error("GenSpec: empty signal vocabulary");
    for (const auto& w : vocab) {
      if (!seen.insert(w).second) {
        throw Error("GenSpec: signal vocabularies are not disjoint (\"" + w + "\")");
      }
    }
  }
  if (filler_vocab.empty()) throw Error("GenSpec: empty filler vocabulary");
  if (noise < 0.0 || noise > 1.0) throw Error("GenSpec: noise rate must lie in [0,1]");
  if (!(signal_fraction > 0.0) || signal_fraction > 1.0) {
    throw Error("GenSpec: signal fraction must lie in (0,1]");
  }
  if (min_length < 1 || max_length < min_length) {
    throw Error("GenSpec: bad length range");
  }
  if (theme_count_probs.empty() || theme_count_probs.size() > themes.size()) {
    throw Error("GenSpec: theme count distribution must have 1..|themes| entries");
  }
  double total = 0.0;
  for (double p : theme_count_probs) {
    if (p < 0.0) throw Error("GenSpec: negative theme count probability");
    total += p;
  }
  if (total <= 0.0) throw Error("GenSpec: theme count probabilities sum to zero");
  if (min_length < theme_count_probs.size()) {
    throw Error("GenSpec: dialogues too short to plant every theme");
  }
  if (train_size + dev_size + test_size == 0) {
    throw Error("GenSpec: all splits empty");
  }
}

namespace {

std::size_t draw_theme_count(const std::vector<double>& probs, Rng& rng) {
  double total = 0.0;
  for (double p : probs) total += p;
  double x = rng.unit() * total;
  for (std::size_t k = 0; k < probs.size(); ++k) {
    if (x < probs[k] || k + 1 == probs.size()) return k + 1;
    x -= probs[k];
  }
  return probs.size();
}

Dialogue make_dialogue(const GenSpec& spec, const ThemeInventory& inventory,
                       Split split, std::size_t index) {
  Rng rng(mix_seed(spec.seed, index));

  Dialogue d;
  d.id = "d" + zero_pad(index, 6);
  d.split = split;

  // Theme labels. Train is mono-label by construction.
  std::size_t count =
      split == Split::train ? 1 : draw_theme_count(spec.theme_count_probs, rng);
  std::vector<std::size_t> order(spec.themes.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  rng.shuffle(order);
  std::vector<std::size_t> planted(order.begin(), order.begin() + count);

  std::size_t n = spec.min_length + rng.below(spec.max_length - spec.min_length + 1);

  // All filler first; signal slots overwrite.
  std::vector<std::size_t> signal_theme(n, SIZE_MAX);
  auto n_signal = [&](std::size_t len) {
    std::size_t s = static_cast<std::size_t>(
        std::llround(spec.signal_fraction * static_cast<double>(len)));
    return std::max<std::size_t>(1, std::min(s, len));
  };

  if (spec.mixing == MixingMode::disjoint_segments) {
    // Contiguous block per planted theme, in planted order.
    for (std::size_t k = 0; k < planted.size(); ++k) {
      std::size_t begin = k * n / planted.size();
      std::size_t end = (k + 1) * n / planted.size();
      std::size_t len = end - begin;
      std::vector<std::size_t> slots(len);
      for (std::size_t i = 0; i < len; ++i) slots[i] = begin + i;
      std::size_t want = n_signal(len);
      for (std::size_t i = 0; i < want; ++i) {
        std::size_t j = i + rng.below(slots.size() - i);
        std::swap(slots[i], slots[j]);
        signal_theme[slots[i]] = planted[k];
      }
    }
  } else {
    std::size_t want = std::max(planted.size(), n_signal(n));
    std::vector<std::size_t> slots(n);
    for (std::size_t i = 0; i < n; ++i) slots[i] = i;
    for (std::size_t i = 0; i < want; ++i) {
      std::size_t j = i + rng.below(slots.size() - i);
      std::swap(slots[i], slots[j]);
    }
    slots.resize(want);
    if (spec.mixing == MixingMode::co_mentioned) {
      // Round-robin over position-sorted slots keeps different themes
      // adjacent, imitating several topics inside one short passage.
      std::sort(slots.begin(), slots.end());
      for (std::size_t i = 0; i < slots.size(); ++i) {
        signal_theme[slots[i]] = planted[i % planted.size()];
      }
    } else {
      // Interleaved: cover every theme once, then draw uniformly.
      for (std::size_t i = 0; i < slots.size(); ++i) {
        signal_theme[slots[i]] =
            i < planted.size() ? planted[i] : planted[rng.below(planted.size())];
      }
    }
  }

  d.tokens.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t theme = signal_theme[i];
    if (theme == SIZE_MAX) {
      d.tokens.push_back(spec.filler_vocab[rng.below(spec.filler_vocab.size())]);
      continue;
    }
    const auto& vocab = spec.signal_vocab[theme];
    std::string token = vocab[rng.below(vocab.size())];
    if (spec.noise > 0.0 && rng.unit() < spec.noise) {
      token = spec.filler_vocab[rng.below(spec.filler_vocab.size())];
    }
    d.tokens.push_back(std::move(token));
  }

  std::set<ThemeIndex> labels;
  for (std::size_t t : planted) {
    labels.insert(*inventory.find(normalize_token(spec.themes[t])));
  }
  d.labels.assign(labels.begin(), labels.end());
  return d;
}

}  // namespace

Corpus generate(const GenSpec& spec) {
  spec.validate();

  Corpus corpus;
  corpus.themes = ThemeInventory::from_names(spec.themes);

  // Per-dialogue seeds derived from the index make dialogues independent,
  // so generation order (and the worker schedule) cannot change the output.
  std::size_t total = spec.train_size + spec.dev_size + spec.test_size;
  corpus.dialogues.resize(total);
  parallel_for(total, [&](std::size_t index) {
    Split split = index < spec.train_size ? Split::train
                  : index < spec.train_size + spec.dev_size ? Split::dev
                                                            : Split::test;
    corpus.dialogues[index] = make_dialogue(spec, corpus.themes, split, index);
  });
  return corpus;
}

}  // namespace themekit
