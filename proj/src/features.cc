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

#include "themekit/features.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_set>

namespace themekit {

FeatureId FeatureId::unigram(std::string word) {
  return FeatureId{FeatureKind::unigram, std::move(word), "", 0};
}

FeatureId FeatureId::bigram(std::string first, std::string second, std::uint8_t gap) {
  return FeatureId{FeatureKind::bigram, std::move(first), std::move(second), gap};
}

std::size_t FeatureIdHash::operator()(const FeatureId& f) const {
  std::size_t h = std::hash<std::string>()(f.word1);
  h ^= std::hash<std::string>()(f.word2) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  h ^= (static_cast<std::size_t>(f.kind) << 1) ^ f.gap;
  return h;
}

std::vector<FeatureOccurrence> extract_features(const Dialogue& dialogue) {
  const auto& toks = dialogue.tokens;
  const std::size_t n = toks.size();
  std::vector<FeatureOccurrence> out;
  out.reserve(n + (n > 1 ? n - 1 : 0) + (n > 2 ? n - 2 : 0));
  for (std::size_t i = 0; i < n; ++i) {
    std::uint32_t pos = static_cast<std::uint32_t>(i + 1);
    out.push_back({FeatureId::unigram(toks[i]), pos, pos});
    if (i + 1 < n) {
      out.push_back({FeatureId::bigram(toks[i], toks[i + 1], 0), pos, pos + 1});
    }
    if (i + 2 < n) {
      out.push_back({FeatureId::bigram(toks[i], toks[i + 2], 1), pos, pos + 2});
    }
  }
  return out;
}

double gini(std::span<const std::uint32_t> df_c, std::uint32_t df_T) {
  if (df_T == 0) throw Error("gini: feature unseen in train (df_T = 0)");
  // Integer numerator/denominator keep the boundary cases exact: a
  // single-class feature gives exactly 1, a uniform one exactly 1/K.
  std::uint64_t sum_sq = 0;
  for (std::uint32_t c : df_c) {
    sum_sq += static_cast<std::uint64_t>(c) * static_cast<std::uint64_t>(c);
  }
  double denom = static_cast<double>(df_T) * static_cast<double>(df_T);
  return static_cast<double>(sum_sq) / denom;
}

double idf(std::uint32_t df_T, std::uint32_t train_size) {
  if (df_T == 0) throw Error("idf: feature unseen in train (df_T = 0)");
  if (df_T > train_size) {
    throw Error("idf: df_T exceeds the train-set size");
  }
  return std::log(static_cast<double>(train_size) / static_cast<double>(df_T));
}

double theme_weight(std::uint32_t df_c, double idf_value, double gini_value) {
  return static_cast<double>(df_c) * idf_value * idf_value * gini_value * gini_value;
}

FeatureSpace select_features(const Corpus& corpus, double min_gini,
                             std::uint32_t min_df, SelectionSummary* summary) {
  std::vector<std::size_t> train = corpus.indices_of(Split::train);
  if (train.empty()) throw Error("train split is empty");
  const std::size_t n_themes = corpus.themes.size();

  struct Counts {
    std::uint32_t df_T = 0;
    std::vector<std::uint32_t> df_c;
  };
  std::unordered_map<FeatureId, Counts, FeatureIdHash> counts;
  std::unordered_set<std::string> lexicon;

  for (std::size_t di : train) {
    const Dialogue& d = corpus.dialogues[di];
    for (const auto& tok : d.tokens) lexicon.insert(tok);
    // Document frequency: repeated occurrences inside one dialogue count once.
    std::unordered_set<FeatureId, FeatureIdHash> uniq;
    for (auto& occ : extract_features(d)) uniq.insert(std::move(occ.id));
    for (const auto& f : uniq) {
      Counts& c = counts[f];
      if (c.df_c.empty()) c.df_c.assign(n_themes, 0);
      ++c.df_T;
      for (ThemeIndex t : d.labels) ++c.df_c[t];
    }
  }

  FeatureSpace space;
  space.themes = corpus.themes;
  space.min_gini = min_gini;
  space.min_df = min_df;
  space.train_size = static_cast<std::uint32_t>(train.size());
  space.selected.reserve(counts.size());

  for (auto& [fid, c] : counts) {
    double g = gini(c.df_c, c.df_T);
    if (g < min_gini || c.df_T < min_df) continue;
    FeatureStats stats;
    stats.df_train = c.df_T;
    stats.df_theme = std::move(c.df_c);
    stats.idf = idf(c.df_T, space.train_size);
    stats.gini = g;
    stats.weight.resize(n_themes);
    for (std::size_t t = 0; t < n_themes; ++t) {
      stats.weight[t] = theme_weight(stats.df_theme[t], stats.idf, stats.gini);
    }
    space.selected.emplace(fid, std::move(stats));
  }

  space.theme_norms.assign(n_themes, 0.0);
  for (const auto& [fid, stats] : space.selected) {
    for (std::size_t t = 0; t < n_themes; ++t) {
      space.theme_norms[t] += stats.weight[t] * stats.weight[t];
    }
  }
  for (std::size_t t = 0; t < n_themes; ++t) {
    space.theme_norms[t] = std::sqrt(space.theme_norms[t]);
    if (space.theme_norms[t] == 0.0) {
      throw Error("selection emptied theme vector for \"" + corpus.themes.name(
                      static_cast<ThemeIndex>(t)) +
                  "\"; lower min_gini or min_df");
    }
  }

  if (summary) {
    summary->lexicon_size = lexicon.size();
    summary->attested = counts.size();
    summary->selected = space.selected.size();
  }
  return space;
}

namespace {

constexpr const char* kFeatureFileMagic = "themekit-features\tv1";

[[noreturn]] void file_error(const std::filesystem::path& path, std::size_t line,
                             const std::string& message) {
  throw Error(path.string() + ":" + std::to_string(line) + ": " + message);
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t tab = line.find('\t', start);
    if (tab == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
  return fields;
}

}  // namespace

void save_feature_space(const FeatureSpace& space, const std::filesystem::path& path) {
  std::vector<const FeatureId*> order;
  order.reserve(space.selected.size());
  for (const auto& [fid, _] : space.selected) order.push_back(&fid);
  std::sort(order.begin(), order.end(),
            [](const FeatureId* a, const FeatureId* b) { return *a < *b; });

  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write feature file " + path.string());
  out << kFeatureFileMagic << '\n';
  out << "themes";
  for (const auto& name : space.themes.names()) out << '\t' << name;
  out << '\n';
  out << "train_size\t" << space.train_size << '\n';
  out << "min_gini\t" << format_double(space.min_gini) << '\n';
  out << "min_df\t" << space.min_df << '\n';
  out << "features\t" << space.selected.size() << '\n';
  for (const FeatureId* fid : order) {
    const FeatureStats& stats = space.selected.at(*fid);
    if (fid->kind == FeatureKind::unigram) {
      out << "u\t" << fid->word1;
    } else {
      out << "b\t" << fid->word1 << '\t' << fid->word2 << '\t'
          << static_cast<int>(fid->gap);
    }
    out << '\t' << stats.df_train;
    for (std::uint32_t c : stats.df_theme) out << '\t' << c;
    out << '\n';
  }
  if (!out) throw Error("error while writing feature file " + path.string());
}

FeatureSpace load_feature_space(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open feature file " + path.string());

  std::string line;
  std::size_t lineno = 0;
  auto next_line = [&]() -> bool {
    if (!std::getline(in, line)) return false;
    ++lineno;
    return true;
  };

  if (!next_line() || line != kFeatureFileMagic) {
    file_error(path, lineno, "not a themekit feature file");
  }

  FeatureSpace space;
  std::size_t declared = 0;
  for (const char* key : {"themes", "train_size", "min_gini", "min_df", "features"}) {
    if (!next_line()) file_error(path, lineno, "truncated header");
    auto fields = split_tabs(line);
    if (fields.empty() || fields[0] != key) {
      file_error(path, lineno, std::string("expected header field \"") + key + "\"");
    }
    try {
      if (fields[0] == std::string("themes")) {
        space.themes = ThemeInventory::from_names(
            std::vector<std::string>(fields.begin() + 1, fields.end()));
      } else if (fields.size() != 2) {
        file_error(path, lineno, "bad header field");
      } else if (fields[0] == std::string("train_size")) {
        space.train_size = static_cast<std::uint32_t>(std::stoul(fields[1]));
      } else if (fields[0] == std::string("min_gini")) {
        space.min_gini = std::stod(fields[1]);
      } else if (fields[0] == std::string("min_df")) {
        space.min_df = static_cast<std::uint32_t>(std::stoul(fields[1]));
      } else {
        declared = std::stoul(fields[1]);
      }
    } catch (const Error&) {
      throw;
    } catch (const std::exception& e) {
      file_error(path, lineno, std::string("bad header value: ") + e.what());
    }
  }

  const std::size_t n_themes = space.themes.size();
  while (next_line()) {
    if (line.empty()) continue;
    auto fields = split_tabs(line);
    FeatureId fid;
    std::size_t stat_start = 0;
    if (fields[0] == "u" && fields.size() == 2 + 1 + n_themes) {
      fid = FeatureId::unigram(fields[1]);
      stat_start = 2;
    } else if (fields[0] == "b" && fields.size() == 4 + 1 + n_themes) {
      int gap = 0;
      try {
        gap = std::stoi(fields[3]);
      } catch (const std::exception&) {
        file_error(path, lineno, "bad gap value");
      }
      if (gap != 0 && gap != 1) file_error(path, lineno, "gap must be 0 or 1");
      fid = FeatureId::bigram(fields[1], fields[2], static_cast<std::uint8_t>(gap));
      stat_start = 4;
    } else {
      file_error(path, lineno, "malformed feature record");
    }

    FeatureStats stats;
    try {
      stats.df_train = static_cast<std::uint32_t>(std::stoul(fields[stat_start]));
      for (std::size_t t = 0; t < n_themes; ++t) {
        stats.df_theme.push_back(
            static_cast<std::uint32_t>(std::stoul(fields[stat_start + 1 + t])));
      }
    } catch (const std::exception&) {
      file_error(path, lineno, "bad count value");
    }
    stats.idf = idf(stats.df_train, space.train_size);
    stats.gini = gini(stats.df_theme, stats.df_train);
    stats.weight.resize(n_themes);
    for (std::size_t t = 0; t < n_themes; ++t) {
      stats.weight[t] = theme_weight(stats.df_theme[t], stats.idf, stats.gini);
    }
    if (!space.selected.emplace(std::move(fid), std::move(stats)).second) {
      file_error(path, lineno, "duplicate feature record");
    }
  }
  if (space.selected.size() != declared) {
    throw Error(path.string() + ": feature count mismatch (header says " +
                std::to_string(declared) + ", file has " +
                std::to_string(space.selected.size()) + ")");
  }

  space.theme_norms.assign(n_themes, 0.0);
  for (const auto& [fid, stats] : space.selected) {
    for (std::size_t t = 0; t < n_themes; ++t) {
      space.theme_norms[t] += stats.weight[t] * stats.weight[t];
    }
  }
  for (std::size_t t = 0; t < n_themes; ++t) {
    space.theme_norms[t] = std::sqrt(space.theme_norms[t]);
    if (space.theme_norms[t] == 0.0) {
      throw Error(path.string() + ": theme vector for \"" +
                  space.themes.name(static_cast<ThemeIndex>(t)) + "\" is empty");
    }
  }
  return space;
}

}  // namespace themekit
