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

#include "themekit/report_io.h"

#include <algorithm>
#include <cstdio>
#include <fstream>

#include "themekit/util.h"

namespace themekit {

namespace {

constexpr const char* kHypMagic = "# themekit-hypotheses v1";

std::vector<std::string> split_on(const std::string& line, char sep) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = line.find(sep, start);
    if (pos == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return fields;
}

std::string fp_hex(std::uint64_t fp) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(fp));
  return buf;
}

}  // namespace

void save_hypotheses(const HypothesisFile& file, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write hypotheses file " + path.string());

  out << kHypMagic << " method=" << file.method << " split=" << to_string(file.split)
      << " corpus=" << fp_hex(file.corpus_fp) << '\n';
  out << "id";
  for (const auto& name : file.themes.names()) out << ",score_" << name;
  out << ",hypotheses,status\n";

  std::vector<const HypothesisRecord*> order;
  order.reserve(file.records.size());
  for (const auto& r : file.records) order.push_back(&r);
  std::sort(order.begin(), order.end(),
            [](const HypothesisRecord* a, const HypothesisRecord* b) {
              return a->id < b->id;
            });

  for (const HypothesisRecord* r : order) {
    out << r->id;
    for (double s : r->scores) out << ',' << format_double(s);
    out << ',';
    for (std::size_t i = 0; i < r->decision.themes.size(); ++i) {
      if (i) out << '|';
      out << file.themes.name(r->decision.themes[i]);
    }
    out << ',' << to_string(r->decision.status) << '\n';
  }
  if (!out) throw Error("error while writing hypotheses file " + path.string());
}

HypothesisFile load_hypotheses(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open hypotheses file " + path.string());

  std::string line;
  if (!std::getline(in, line) || line.rfind(kHypMagic, 0) != 0) {
    throw Error(path.string() + ": not a themekit hypotheses file");
  }

  HypothesisFile file;
  for (const auto& field : split_on(line.substr(std::string(kHypMagic).size()), ' ')) {
    if (field.empty()) continue;
    std::size_t eq = field.find('=');
    if (eq == std::string::npos) continue;
    std::string key = field.substr(0, eq), value = field.substr(eq + 1);
    if (key == "method") {
      file.method = value;
    } else if (key == "split") {
      file.split = split_from_string(value);
    } else if (key == "corpus") {
      file.corpus_fp = std::stoull(value, nullptr, 16);
    }
  }
  if (file.method.empty()) throw Error(path.string() + ": missing method");

  if (!std::getline(in, line)) throw Error(path.string() + ": missing column header");
  auto columns = split_on(line, ',');
  if (columns.size() < 4 || columns.front() != "id" ||
      columns[columns.size() - 2] != "hypotheses" || columns.back() != "status") {
    throw Error(path.string() + ": malformed column header");
  }
  std::vector<std::string> theme_names;
  for (std::size_t i = 1; i + 2 < columns.size(); ++i) {
    if (columns[i].rfind("score_", 0) != 0) {
      throw Error(path.string() + ": malformed score column \"" + columns[i] + "\"");
    }
    theme_names.push_back(columns[i].substr(6));
  }
  file.themes = ThemeInventory::from_names(theme_names);

  std::size_t lineno = 2;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto fields = split_on(line, ',');
    if (fields.size() != columns.size()) {
      throw Error(path.string() + ":" + std::to_string(lineno) + ": malformed record");
    }
    HypothesisRecord r;
    r.id = fields[0];
    try {
      for (std::size_t i = 0; i < theme_names.size(); ++i) {
        r.scores.push_back(std::stod(fields[1 + i]));
      }
    } catch (const std::exception&) {
      throw Error(path.string() + ":" + std::to_string(lineno) + ": bad score value");
    }
    if (!fields[fields.size() - 2].empty()) {
      for (const auto& name : split_on(fields[fields.size() - 2], '|')) {
        auto idx = file.themes.find(name);
        if (!idx) {
          throw Error(path.string() + ":" + std::to_string(lineno) +
                      ": unknown theme \"" + name + "\"");
        }
        r.decision.themes.push_back(*idx);
      }
      std::sort(r.decision.themes.begin(), r.decision.themes.end());
    }
    r.decision.status = decision_status_from_string(fields.back());
    file.records.push_back(std::move(r));
  }
  return file;
}

std::map<std::string, Hypothesis> hypotheses_for_eval(const HypothesisFile& file) {
  std::map<std::string, Hypothesis> out;
  for (const auto& r : file.records) {
    Hypothesis h;
    h.themes = r.decision.themes;
    h.rejected = r.decision.rejected();
    if (!out.emplace(r.id, std::move(h)).second) {
      throw Error("duplicate id \"" + r.id + "\" in hypotheses");
    }
  }
  return out;
}

void write_eval_reports(
    const std::vector<std::pair<std::string, EvalReport>>& reports,
    const ThemeInventory& themes, const std::filesystem::path& out_dir) {
  if (reports.empty()) throw Error("write_eval_reports: nothing to write");
  std::filesystem::create_directories(out_dir);

  // Human-readable table, metric rows by method columns.
  {
    std::ofstream out(out_dir / "report.txt", std::ios::binary);
    if (!out) throw Error("cannot write report.txt");
    auto cell = [&](const std::string& v) {
      out << "  ";
      for (std::size_t i = v.size(); i < 10; ++i) out << ' ';
      out << v;
    };
    auto row = [&](const std::string& label,
                   const std::function<std::string(const EvalReport&)>& value_of) {
      out << label;
      for (std::size_t i = label.size(); i < 12; ++i) out << ' ';
      for (const auto& [method, report] : reports) cell(value_of(report));
      out << '\n';
    };
    out << "metric";
    for (std::size_t i = 6; i < 12; ++i) out << ' ';
    for (const auto& [method, report] : reports) cell(method);
    out << '\n';
    auto fmt = [](double x) { return format_double(x, 4); };
    row("accuracy", [&](const EvalReport& r) { return fmt(r.accuracy); });
    row("precision", [&](const EvalReport& r) { return fmt(r.precision); });
    row("recall", [&](const EvalReport& r) { return fmt(r.recall); });
    row("f-score", [&](const EvalReport& r) { return fmt(r.fscore); });
    row("evaluated", [](const EvalReport& r) { return std::to_string(r.evaluated); });
    row("rejected", [](const EvalReport& r) { return std::to_string(r.rejected); });
  }

  // Machine-readable flat file.
  {
    std::ofstream out(out_dir / "report.kv", std::ios::binary);
    if (!out) throw Error("cannot write report.kv");
    for (const auto& [method, report] : reports) {
      out << method << ".recall\t" << format_double(report.recall) << '\n';
      out << method << ".precision\t" << format_double(report.precision) << '\n';
      out << method << ".fscore\t" << format_double(report.fscore) << '\n';
      out << method << ".accuracy\t" << format_double(report.accuracy) << '\n';
      out << method << ".corpus_size\t" << report.corpus_size << '\n';
      out << method << ".evaluated\t" << report.evaluated << '\n';
      out << method << ".rejected\t" << report.rejected << '\n';
    }
  }

  for (const auto& [method, report] : reports) {
    std::ofstream out(out_dir / ("breakdown_" + method + ".csv"), std::ios::binary);
    if (!out) throw Error("cannot write breakdown csv");
    out << "id,gold,hypothesis,n_correct,recall,precision,accuracy,rejected\n";
    for (const auto& row : report.breakdown) {
      out << row.id << ',';
      for (std::size_t i = 0; i < row.gold.size(); ++i) {
        if (i) out << '|';
        out << themes.name(row.gold[i]);
      }
      out << ',';
      for (std::size_t i = 0; i < row.hypothesis.size(); ++i) {
        if (i) out << '|';
        out << themes.name(row.hypothesis[i]);
      }
      out << ',' << row.n_correct;
      if (row.rejected) {
        out << ",,,,1\n";
      } else {
        out << ',' << format_double(row.terms.recall) << ','
            << format_double(row.terms.precision) << ','
            << format_double(row.terms.accuracy) << ",0\n";
      }
    }
  }
}

}  // namespace themekit
