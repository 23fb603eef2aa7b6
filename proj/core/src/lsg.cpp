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

#include "dpndd/lsg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "dpndd/error.hpp"
#include "json.hpp"

namespace dpndd {

using json = nlohmann::json;

namespace {

std::optional<std::set<std::string>> tag_set(const json& j, const char* key, const std::string& label) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  auto tags = j.at(key).get<std::set<std::string>>();
  if (tags.empty()) {
    throw Error(ErrorCode::kConfig, std::string("empty ") + key + " set for " + label + " (use null for any)");
  }
  return tags;
}

}  // namespace

ConstraintTable read_constraints_json(std::istream& in) {
  ConstraintTable table;
  try {
    const json j = json::parse(in);
    for (const auto& row : j) {
      PosConstraint c;
      c.label = row.at("label").get<std::string>();
      c.start_pos = tag_set(row, "start_pos", c.label);
      c.end_pos = tag_set(row, "end_pos", c.label);
      c.before_pos = tag_set(row, "before_pos", c.label);
      c.after_pos = tag_set(row, "after_pos", c.label);
      if (row.contains("max_len") && !row.at("max_len").is_null()) {
        const auto len = row.at("max_len").get<long long>();
        if (len < 1) throw Error(ErrorCode::kConfig, "max_len must be positive for " + c.label);
        c.max_len = static_cast<std::size_t>(len);
      }
      table[c.label] = std::move(c);
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kConfig, std::string("bad constraints file: ") + e.what());
  }
  return table;
}

ConstraintTable read_constraints_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kConfig, "cannot open constraints file " + path.string());
  return read_constraints_json(in);
}

const LabelConfig& ThresholdConfig::at(const std::string& label) const {
  for (const auto& c : labels) {
    if (c.label == label) return c;
  }
  throw Error(ErrorCode::kConfig, "no threshold configured for label " + label);
}

std::vector<std::string> ThresholdConfig::label_order() const {
  std::vector<std::string> out;
  for (const auto& c : labels) out.push_back(c.label);
  return out;
}

ThresholdConfig read_thresholds_json(std::istream& in) {
  ThresholdConfig config;
  try {
    const json j = json::parse(in);
    config.profile = j.value("profile", std::string());
    for (const auto& row : j.at("labels")) {
      LabelConfig c{row.at("label").get<std::string>(), row.at("threshold").get<double>(),
                    row.at("tolerance").get<double>()};
      if (!(c.threshold > 0.0) || !(c.tolerance >= 0.0)) {
        throw Error(ErrorCode::kConfig, "threshold must be > 0 and tolerance >= 0 for " + c.label);
      }
      config.labels.push_back(std::move(c));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kConfig, std::string("bad thresholds file: ") + e.what());
  }
  return config;
}

ThresholdConfig read_thresholds_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kConfig, "cannot open thresholds file " + path.string());
  return read_thresholds_json(in);
}

std::vector<Span> select_candidates(const LabeledTree& tagged, const PosConstraint& c) {
  const std::size_t n = tagged.words.size();
  if (tagged.pos.size() != n) throw Error(ErrorCode::kInvalidRange, "candidate selection needs POS tags");
  auto allowed = [](const std::optional<std::set<std::string>>& set, const std::string& tag) {
    return !set || set->contains(tag);
  };
  std::vector<Span> out;
  for (std::size_t s = 1; s <= n; ++s) {
    if (!allowed(c.start_pos, tagged.pos[s - 1])) continue;
    const std::string& before = s == 1 ? std::string(kSentenceStart) : tagged.pos[s - 2];
    if (!allowed(c.before_pos, before)) continue;
    for (std::size_t t = s; t <= n; ++t) {
      if (c.max_len && t - s + 1 > *c.max_len) break;
      if (s == 1 && t == n) continue;
      if (!allowed(c.end_pos, tagged.pos[t - 1])) continue;
      const std::string& after = t == n ? std::string(kSentenceEnd) : tagged.pos[t];
      if (!allowed(c.after_pos, after)) continue;
      out.push_back({s, t});
    }
  }
  return out;
}

std::vector<ScoredSpan> score_candidates(const std::vector<Span>& candidates, const std::string& label,
                                         const TokenizedSentence& sentence, SpanScorer& scorer) {
  std::vector<ScoredSpan> out;
  out.reserve(candidates.size());
  for (const auto& c : candidates) {
    out.push_back({c.start, c.end, label, scorer.score(label, sentence, c.start, c.end)});
  }
  return out;
}

std::vector<ScoredSpan> remove_conflicts(const std::vector<ScoredSpan>& spans,
                                         const std::vector<ScoredSpan>& accepted) {
  std::vector<ScoredSpan> out;
  for (const auto& s : spans) {
    const bool conflict = std::any_of(accepted.begin(), accepted.end(),
                                      [&](const ScoredSpan& a) { return crosses(a.span(), s.span()); });
    if (!conflict) out.push_back(s);
  }
  return out;
}

std::vector<ScoredSpan> filter_spans(const std::vector<ScoredSpan>& spans, const LabelConfig& config,
                                     OverlapKeep keep) {
  std::vector<ScoredSpan> pool;
  for (const auto& s : spans) {
    if (s.score < config.threshold) pool.push_back(s);
  }
  std::stable_sort(pool.begin(), pool.end(), [keep](const ScoredSpan& a, const ScoredSpan& b) {
    if (a.score != b.score) return keep == OverlapKeep::kLower ? a.score < b.score : a.score > b.score;
    return a.span() < b.span();
  });

  std::vector<ScoredSpan> kept;
  for (const auto& s : pool) {
    bool drop = false;
    for (const auto& k : kept) {
      if (k.span() == s.span() || crosses(k.span(), s.span())) {
        drop = true;
      } else if (nested(k.span(), s.span()) && !(std::abs(k.score - s.score) < config.tolerance)) {
        drop = true;
      }
      if (drop) break;
    }
    if (!drop) kept.push_back(s);
  }
  return kept;
}

std::vector<ScoredSpan> parse_sentence(const LabeledTree& tagged, const TokenizedSentence& sentence,
                                       const LsgSetup& setup, SpanScorer& scorer) {
  const auto order = setup.label_order.empty() ? setup.thresholds.label_order() : setup.label_order;
  std::vector<ScoredSpan> accepted;
  for (const auto& label : order) {
    const LabelConfig& config = setup.thresholds.at(label);
    PosConstraint unconstrained{label, {}, {}, {}, {}, {}};
    auto it = setup.constraints.find(label);
    const PosConstraint& constraint = it == setup.constraints.end() ? unconstrained : it->second;

    const auto candidates = select_candidates(tagged, constraint);
    if (candidates.empty()) continue;
    auto scored = score_candidates(candidates, label, sentence, scorer);
    auto survivors = filter_spans(remove_conflicts(scored, accepted), config, setup.overlap_keep);
    accepted.insert(accepted.end(), survivors.begin(), survivors.end());
  }
  return accepted;
}

LabeledTree spans_to_tree(const LabeledTree& tagged, const std::vector<ScoredSpan>& spans) {
  LabeledTree out;
  out.words = tagged.words;
  out.pos = tagged.pos;
  for (const auto& s : spans) out.spans.push_back({s.start, s.end, s.label});
  return out;
}

}  // namespace dpndd
