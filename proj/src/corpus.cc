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

#include "themekit/corpus.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

namespace themekit {

using json = nlohmann::json;

std::string to_string(Split split) {
  switch (split) {
    case Split::train: return "train";
    case Split::dev: return "dev";
    case Split::test: return "test";
  }
  throw Error("invalid split value");
}

Split split_from_string(std::string_view s) {
  if (s == "train") return Split::train;
  if (s == "dev") return Split::dev;
  if (s == "test") return Split::test;
  throw Error("unknown split \"" + std::string(s) +
              "\" (expected train, dev or test)");
}

namespace {

// Code-point helpers for the small slice of Unicode that call-centre
// transcripts actually need: ASCII plus Latin-1 letters. Anything else
// passes through unchanged.

// Decodes one UTF-8 code point starting at s[i]; advances i past it.
// Invalid bytes are returned as-is (one byte, value < 0x100).
char32_t decode_utf8(std::string_view s, std::size_t& i) {
  unsigned char b0 = static_cast<unsigned char>(s[i]);
  std::size_t len = 0;
  char32_t cp = 0;
  if (b0 < 0x80) {
    ++i;
    return b0;
  } else if ((b0 & 0xe0) == 0xc0) {
    len = 2;
    cp = b0 & 0x1f;
  } else if ((b0 & 0xf0) == 0xe0) {
    len = 3;
    cp = b0 & 0x0f;
  } else if ((b0 & 0xf8) == 0xf0) {
    len = 4;
    cp = b0 & 0x07;
  } else {
    ++i;
    return b0;
  }
  if (i + len > s.size()) {
    ++i;
    return b0;
  }
  for (std::size_t k = 1; k < len; ++k) {
    unsigned char b = static_cast<unsigned char>(s[i + k]);
    if ((b & 0xc0) != 0x80) {
      ++i;
      return b0;
    }
    cp = (cp << 6) | (b & 0x3f);
  }
  i += len;
  return cp;
}

void encode_utf8(char32_t cp, std::string& out) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xc0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xe0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3f)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
  } else {
    out.push_back(static_cast<char>(0xf0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3f)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3f)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
  }
}

char32_t fold_case(char32_t cp) {
  if (cp >= U'A' && cp <= U'Z') return cp + 0x20;
  // Latin-1 supplement uppercase block, skipping the multiplication sign.
  if (cp >= 0xc0 && cp <= 0xde && cp != 0xd7) return cp + 0x20;
  if (cp == 0x152) return 0x153;  // OE ligature
  if (cp == 0x178) return 0xff;   // Y with diaeresis
  return cp;
}

bool is_letter_or_digit(char32_t cp) {
  if ((cp >= U'a' && cp <= U'z') || (cp >= U'A' && cp <= U'Z') ||
      (cp >= U'0' && cp <= U'9')) {
    return true;
  }
  // Latin-1 letters and the couple of Latin Extended-A points we fold.
  if (cp >= 0xc0 && cp <= 0xff && cp != 0xd7 && cp != 0xf7) return true;
  if (cp == 0x152 || cp == 0x153 || cp == 0x178) return true;
  return false;
}

bool is_strippable(char32_t cp) {
  if (cp <= 0x20 || cp == 0x7f) return true;  // control + space
  if (cp < 0x80) return !is_letter_or_digit(cp);
  switch (cp) {
    case 0xa0:    // no-break space
    case 0xa1:    // inverted exclamation
    case 0xab:    // left guillemet
    case 0xbb:    // right guillemet
    case 0xbf:    // inverted question mark
    case 0x2013:  // en dash
    case 0x2014:  // em dash
    case 0x2018:
    case 0x2019:  // single quotes
    case 0x201c:
    case 0x201d:  // double quotes
    case 0x2026:  // ellipsis
    case 0x00b7:  // middle dot
      return true;
    default:
      return false;
  }
}

}  // namespace

std::string normalize_token(std::string_view raw) {
  std::vector<char32_t> cps;
  cps.reserve(raw.size());
  std::size_t i = 0;
  while (i < raw.size()) cps.push_back(fold_case(decode_utf8(raw, i)));

  std::size_t begin = 0, end = cps.size();
  while (begin < end && is_strippable(cps[begin])) ++begin;
  while (end > begin && is_strippable(cps[end - 1])) --end;

  std::string out;
  for (std::size_t k = begin; k < end; ++k) encode_utf8(cps[k], out);
  return out;
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t j = i;
    while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
    if (j > i) {
      std::string tok = normalize_token(text.substr(i, j - i));
      if (!tok.empty()) tokens.push_back(std::move(tok));
    }
    i = j;
  }
  return tokens;
}

ThemeInventory ThemeInventory::from_names(const std::vector<std::string>& names) {
  if (names.empty()) throw Error("theme inventory is empty");
  std::vector<std::string> normalized;
  normalized.reserve(names.size());
  for (const auto& raw : names) {
    std::string name = normalize_token(raw);
    if (name.empty()) {
      throw Error("invalid theme name \"" + raw + "\"");
    }
    if (name.find('\t') != std::string::npos ||
        name.find(',') != std::string::npos ||
        name.find('\n') != std::string::npos) {
      throw Error("theme name \"" + name + "\" may not contain tab, comma or newline");
    }
    normalized.push_back(std::move(name));
  }
  std::sort(normalized.begin(), normalized.end());
  auto dup = std::adjacent_find(normalized.begin(), normalized.end());
  if (dup != normalized.end()) {
    throw Error("duplicate theme name \"" + *dup + "\"");
  }
  ThemeInventory inv;
  inv.names_ = std::move(normalized);
  return inv;
}

std::optional<ThemeIndex> ThemeInventory::find(std::string_view name) const {
  auto it = std::lower_bound(names_.begin(), names_.end(), name);
  if (it != names_.end() && *it == name) {
    return static_cast<ThemeIndex>(it - names_.begin());
  }
  return std::nullopt;
}

const std::vector<std::string>& ThemeInventory::default_theme_names() {
  static const std::vector<std::string> kNames = {
      "itinerary",      "lost_and_found", "time_schedules", "transportation_card",
      "traffic_state",  "fine",           "special_offers"};
  return kNames;
}

std::vector<std::size_t> Corpus::indices_of(Split split) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < dialogues.size(); ++i) {
    if (dialogues[i].split == split) out.push_back(i);
  }
  return out;
}

const Dialogue* Corpus::find(std::string_view id) const {
  for (const auto& d : dialogues) {
    if (d.id == id) return &d;
  }
  return nullptr;
}

namespace {

[[noreturn]] void line_error(const std::filesystem::path& path, std::size_t line,
                             const std::string& message) {
  throw Error(path.string() + ":" + std::to_string(line) + ": " + message);
}

}  // namespace

Corpus load_corpus(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open corpus file " + path.string());

  Corpus corpus;
  std::unordered_set<std::string> seen_ids;
  bool have_header = false;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    json record;
    try {
      record = json::parse(line);
    } catch (const json::exception& e) {
      line_error(path, lineno, std::string("malformed record: ") + e.what());
    }
    if (!record.is_object()) line_error(path, lineno, "malformed record: not an object");

    if (!have_header) {
      if (!record.contains("themes") || !record["themes"].is_array()) {
        line_error(path, lineno, "header record must declare \"themes\"");
      }
      std::vector<std::string> names;
      for (const auto& n : record["themes"]) {
        if (!n.is_string()) line_error(path, lineno, "theme names must be strings");
        names.push_back(n.get<std::string>());
      }
      try {
        corpus.themes = ThemeInventory::from_names(names);
      } catch (const Error& e) {
        line_error(path, lineno, e.what());
      }
      have_header = true;
      continue;
    }

    for (const char* field : {"id", "split", "labels", "text"}) {
      if (!record.contains(field)) {
        line_error(path, lineno, std::string("malformed record: missing field \"") +
                                     field + "\"");
      }
    }
    if (!record["id"].is_string() || !record["split"].is_string() ||
        !record["labels"].is_array() || !record["text"].is_string()) {
      line_error(path, lineno, "malformed record: bad field type");
    }

    Dialogue d;
    d.id = record["id"].get<std::string>();
    if (d.id.empty()) line_error(path, lineno, "empty dialogue id");
    if (!seen_ids.insert(d.id).second) {
      line_error(path, lineno, "duplicate id \"" + d.id + "\"");
    }
    try {
      d.split = split_from_string(record["split"].get<std::string>());
    } catch (const Error& e) {
      line_error(path, lineno, e.what());
    }

    std::set<ThemeIndex> labels;
    for (const auto& l : record["labels"]) {
      if (!l.is_string()) line_error(path, lineno, "labels must be strings");
      std::string name = normalize_token(l.get<std::string>());
      auto idx = corpus.themes.find(name);
      if (!idx) {
        line_error(path, lineno, "unknown theme \"" + l.get<std::string>() + "\"");
      }
      if (!labels.insert(*idx).second) {
        line_error(path, lineno, "duplicate label \"" + name + "\"");
      }
    }
    if (labels.empty()) line_error(path, lineno, "dialogue has no labels");
    if (d.split == Split::train && labels.size() != 1) {
      line_error(path, lineno,
                 "train dialogue \"" + d.id + "\" must carry exactly one label");
    }
    d.labels.assign(labels.begin(), labels.end());

    d.tokens = tokenize(record["text"].get<std::string>());
    if (d.tokens.empty()) line_error(path, lineno, "empty dialogue");

    corpus.dialogues.push_back(std::move(d));
  }
  if (!have_header) throw Error("corpus file " + path.string() + " has no header record");
  return corpus;
}

std::string corpus_to_string(const Corpus& corpus) {
  std::string out;
  json header;
  header["themes"] = corpus.themes.names();
  out += header.dump();
  out += '\n';
  for (const auto& d : corpus.dialogues) {
    json record;
    record["id"] = d.id;
    record["split"] = to_string(d.split);
    std::vector<std::string> labels;
    for (ThemeIndex t : d.labels) labels.push_back(corpus.themes.name(t));
    record["labels"] = labels;
    std::string text;
    for (std::size_t i = 0; i < d.tokens.size(); ++i) {
      if (i) text += ' ';
      text += d.tokens[i];
    }
    record["text"] = text;
    out += record.dump();
    out += '\n';
  }
  return out;
}

void save_corpus(const Corpus& corpus, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write corpus file " + path.string());
  out << corpus_to_string(corpus);
  if (!out) throw Error("error while writing corpus file " + path.string());
}

std::uint64_t corpus_fingerprint(const Corpus& corpus) {
  return fnv1a64(corpus_to_string(corpus));
}

std::vector<std::vector<std::string>> sample_dev_subsets(const Corpus& corpus,
                                                         std::size_t k,
                                                         std::size_t size,
                                                         std::uint64_t seed) {
  if (size < 2) throw Error("subset size must be at least 2");
  std::vector<std::size_t> dev = corpus.indices_of(Split::dev);
  if (dev.empty()) throw Error("dev split is empty");
  if (dev.size() < size) {
    throw Error("dev split has " + std::to_string(dev.size()) +
                " dialogues, fewer than the requested subset size " +
                std::to_string(size));
  }

  std::vector<std::size_t> multi, single;
  for (std::size_t i : dev) {
    (corpus.dialogues[i].labels.size() > 1 ? multi : single).push_back(i);
  }

  // Multi-label quota: dev proportion scaled to the subset size, rounded,
  // then clamped to what the two pools can actually supply.
  double frac = static_cast<double>(multi.size()) / static_cast<double>(dev.size());
  long long target = std::llround(static_cast<double>(size) * frac);
  long long lo = std::max<long long>(0, static_cast<long long>(size) -
                                            static_cast<long long>(single.size()));
  long long hi = std::min<long long>(static_cast<long long>(multi.size()),
                                     static_cast<long long>(size));
  target = std::clamp(target, lo, hi);

  Rng rng(seed);
  std::vector<std::vector<std::string>> subsets;
  subsets.reserve(k);
  for (std::size_t s = 0; s < k; ++s) {
    auto draw = [&rng](std::vector<std::size_t> pool, std::size_t count) {
      // Partial Fisher-Yates: the first `count` entries are the sample.
      for (std::size_t i = 0; i < count; ++i) {
        std::size_t j = i + rng.below(pool.size() - i);
        std::swap(pool[i], pool[j]);
      }
      pool.resize(count);
      return pool;
    };
    std::vector<std::size_t> chosen = draw(multi, static_cast<std::size_t>(target));
    std::vector<std::size_t> singles = draw(single, size - static_cast<std::size_t>(target));
    chosen.insert(chosen.end(), singles.begin(), singles.end());

    std::vector<std::string> ids;
    ids.reserve(chosen.size());
    for (std::size_t i : chosen) ids.push_back(corpus.dialogues[i].id);
    std::sort(ids.begin(), ids.end());
    subsets.push_back(std::move(ids));
  }
  return subsets;
}

}  // namespace themekit
