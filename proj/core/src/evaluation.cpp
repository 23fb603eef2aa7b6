// Copyright 2026 The dpndd Authors.
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

#include "dpndd/evaluation.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <set>
#include <tuple>

#include "dpndd/error.hpp"
#include "json.hpp"

namespace dpndd {

using json = nlohmann::json;

namespace {

using Key = std::tuple<std::size_t, std::size_t, std::string>;

struct Aligned {
  LabeledTree predicted;
  LabeledTree gold;
};

Aligned align(const LabeledTree& predicted, const LabeledTree& gold, std::size_t index,
              const EvalOptions& options) {
  if (predicted.words != gold.words) {
    throw Error(ErrorCode::kTokenMismatch,
                "sentence " + std::to_string(index + 1) + ": predicted and gold words differ");
  }
  Aligned a{predicted, gold};
  if (options.strip_punct) {
    if (gold.pos.size() != gold.words.size()) {
      throw Error(ErrorCode::kConfig, "punctuation stripping needs gold POS tags");
    }
    a.predicted.pos = gold.pos;
    a.predicted = strip_punctuation(a.predicted);
    a.gold = strip_punctuation(a.gold);
  }
  return a;
}

bool trivial(const LabeledSpan& s, std::size_t n) { return s.start == s.end || (s.start == 1 && s.end == n); }

// Spans of one tree as a multiset of keys; the label is blanked for unlabeled matching.
std::map<Key, std::size_t> keys(const LabeledTree& tree, bool labeled, const EvalOptions& options) {
  std::map<Key, std::size_t> out;
  const std::size_t n = tree.words.size();
  for (const auto& s : tree.spans) {
    if (!options.keep_trivial && trivial(s, n)) continue;
    auto& c = out[{s.start, s.end, labeled ? s.label : std::string()}];
    c = options.collapse_duplicates ? 1 : c + 1;
  }
  return out;
}

void check_sizes(const std::vector<LabeledTree>& predicted, const std::vector<LabeledTree>& gold) {
  if (predicted.size() != gold.size()) {
    throw Error(ErrorCode::kSentenceCountMismatch, std::to_string(predicted.size()) + " predicted vs " +
                                                       std::to_string(gold.size()) + " gold sentences");
  }
}

void finalize(F1Report& r) {
  finalize_stats(r.gold, r.predicted, r.matched, r.precision, r.recall, r.f1);
  for (auto& [label, s] : r.per_label) finalize_stats(s.gold, s.predicted, s.matched, s.precision, s.recall, s.f1);
}

std::string pct(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v * 100.0);
  return buf;
}

}  // namespace

void finalize_stats(std::size_t gold, std::size_t predicted, std::size_t matched, double& precision,
                    double& recall, double& f1) {
  precision = predicted == 0 ? 0.0 : static_cast<double>(matched) / static_cast<double>(predicted);
  recall = gold == 0 ? 0.0 : static_cast<double>(matched) / static_cast<double>(gold);
  f1 = precision + recall > 0.0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
}

F1Report unlabeled_f1(const std::vector<LabeledTree>& predicted, const std::vector<LabeledTree>& gold,
                      const EvalOptions& options) {
  check_sizes(predicted, gold);
  F1Report r;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    const Aligned a = align(predicted[i], gold[i], i, options);
    const auto p = keys(a.predicted, false, options);
    const auto g = keys(a.gold, false, options);
    for (const auto& [k, c] : p) r.predicted += c;
    for (const auto& [k, c] : g) {
      r.gold += c;
      auto it = p.find(k);
      if (it != p.end()) r.matched += std::min(c, it->second);
    }

    // Per gold label: is the bracket found at all.
    const auto gl = keys(a.gold, true, options);
    for (const auto& [k, c] : gl) {
      auto& s = r.per_label[std::get<2>(k)];
      s.gold += c;
      if (p.contains({std::get<0>(k), std::get<1>(k), std::string()})) s.matched += c;
    }
  }
  finalize(r);
  return r;
}

F1Report labeled_f1(const std::vector<LabeledTree>& predicted, const std::vector<LabeledTree>& gold,
                    const EvalOptions& options) {
  check_sizes(predicted, gold);
  F1Report r;
  r.labeled = true;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    const Aligned a = align(predicted[i], gold[i], i, options);
    const auto p = keys(a.predicted, true, options);
    const auto g = keys(a.gold, true, options);
    for (const auto& [k, c] : p) {
      r.predicted += c;
      r.per_label[std::get<2>(k)].predicted += c;
    }
    for (const auto& [k, c] : g) {
      r.gold += c;
      auto& s = r.per_label[std::get<2>(k)];
      s.gold += c;
      auto it = p.find(k);
      if (it != p.end()) {
        const auto m = std::min(c, it->second);
        r.matched += m;
        s.matched += m;
      }
    }
  }
  finalize(r);
  return r;
}

std::size_t ConfusionMatrix::at(const std::string& gold, const std::string& predicted) const {
  auto index = [this](const std::string& l) -> std::size_t {
    auto it = std::find(labels.begin(), labels.end(), l);
    if (it == labels.end()) throw Error(ErrorCode::kConfig, "label " + l + " not in confusion matrix");
    return static_cast<std::size_t>(it - labels.begin());
  };
  return counts[index(gold)][index(predicted)];
}

ConfusionMatrix confusion_matrix(const std::vector<LabeledTree>& predicted,
                                 const std::vector<LabeledTree>& gold,
                                 const std::vector<std::string>& labels) {
  check_sizes(predicted, gold);
  std::vector<std::pair<std::string, std::string>> pairs;  // (gold, predicted)
  for (std::size_t i = 0; i < gold.size(); ++i) {
    std::map<Span, std::vector<std::string>> g;
    std::map<Span, std::vector<std::string>> p;
    for (const auto& s : gold[i].spans) g[s.span()].push_back(s.label);
    for (const auto& s : predicted[i].spans) p[s.span()].push_back(s.label);
    bool same = g.size() == p.size();
    for (auto gi = g.begin(), pi = p.begin(); same && gi != g.end(); ++gi, ++pi) {
      same = gi->first == pi->first && gi->second.size() == pi->second.size();
    }
    if (!same) {
      throw Error(ErrorCode::kSpanSetMismatch,
                  "sentence " + std::to_string(i + 1) + ": predicted and gold span sets differ");
    }
    for (const auto& [span, gl] : g) {
      const auto& pl = p.at(span);
      for (std::size_t k = 0; k < gl.size(); ++k) pairs.emplace_back(gl[k], pl[k]);
    }
  }

  ConfusionMatrix m;
  m.labels = labels;
  std::set<std::string> extra;
  for (const auto& [gl, pl] : pairs) {
    for (const auto* l : {&gl, &pl}) {
      if (std::find(labels.begin(), labels.end(), *l) == labels.end()) extra.insert(*l);
    }
  }
  m.labels.insert(m.labels.end(), extra.begin(), extra.end());
  std::map<std::string, std::size_t> index;
  for (std::size_t k = 0; k < m.labels.size(); ++k) index[m.labels[k]] = k;
  m.counts.assign(m.labels.size(), std::vector<std::size_t>(m.labels.size(), 0));
  for (const auto& [gl, pl] : pairs) ++m.counts[index[gl]][index[pl]];
  return m;
}

std::string report_json(const F1Report& report) {
  json j{{"labeled", report.labeled}, {"gold", report.gold},         {"predicted", report.predicted},
         {"matched", report.matched}, {"precision", report.precision}, {"recall", report.recall},
         {"f1", report.f1}};
  json per = json::object();
  for (const auto& [label, s] : report.per_label) {
    per[label] = {{"gold", s.gold},           {"predicted", s.predicted}, {"matched", s.matched},
                  {"precision", s.precision}, {"recall", s.recall},       {"f1", s.f1}};
  }
  j["per_label"] = per;
  return j.dump(2);
}

void write_report_text(std::ostream& out, const F1Report& report) {
  char line[160];
  out << (report.labeled ? "labeled" : "unlabeled") << '\n';
  std::snprintf(line, sizeof line, "%-8s %8s %8s %8s %8s %8s %8s\n", "label", "P", "R", "F1", "gold", "pred",
                "match");
  out << line;
  auto row = [&](const std::string& name, const LabelStats& s, bool precision) {
    std::snprintf(line, sizeof line, "%-8s %8s %8s %8s %8zu %8s %8zu\n", name.c_str(),
                  precision ? pct(s.precision).c_str() : "-", pct(s.recall).c_str(),
                  precision ? pct(s.f1).c_str() : "-", s.gold,
                  precision ? std::to_string(s.predicted).c_str() : "-", s.matched);
    out << line;
  };
  for (const auto& [label, s] : report.per_label) row(label, s, report.labeled);
  row("all", {report.gold, report.predicted, report.matched, report.precision, report.recall, report.f1}, true);
}

std::string confusion_json(const ConfusionMatrix& matrix) {
  return json{{"labels", matrix.labels}, {"counts", matrix.counts}}.dump(2);
}

void write_confusion_csv(std::ostream& out, const ConfusionMatrix& matrix) {
  out << "gold\\predicted";
  for (const auto& l : matrix.labels) out << ',' << l;
  out << '\n';
  for (std::size_t r = 0; r < matrix.labels.size(); ++r) {
    out << matrix.labels[r];
    for (auto c : matrix.counts[r]) out << ',' << c;
    out << '\n';
  }
}

}  // namespace dpndd
