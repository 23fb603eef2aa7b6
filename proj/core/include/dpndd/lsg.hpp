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

#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dpndd/mold.hpp"
#include "dpndd/span.hpp"
#include "dpndd/tokenizer.hpp"
#include "dpndd/treebank.hpp"

namespace dpndd {

inline constexpr const char* kSentenceStart = "SOS";
inline constexpr const char* kSentenceEnd = "EOS";

// Allowed POS tags at V[s], V[t], V[s-1] and V[t+1]; nullopt means no
// constraint. SOS/EOS stand in for positions outside the sentence.
struct PosConstraint {
  std::string label;
  std::optional<std::set<std::string>> start_pos;
  std::optional<std::set<std::string>> end_pos;
  std::optional<std::set<std::string>> before_pos;
  std::optional<std::set<std::string>> after_pos;
  std::optional<std::size_t> max_len;
};

using ConstraintTable = std::map<std::string, PosConstraint>;

// JSON array of {"label", "start_pos", "end_pos", "before_pos", "after_pos",
// "max_len"}, with null for "no constraint".
ConstraintTable read_constraints_json(const std::filesystem::path& path);
ConstraintTable read_constraints_json(std::istream& in);

struct LabelConfig {
  std::string label;
  double threshold = 1.0;
  double tolerance = 0.0;
};

// One threshold/tolerance profile ("tight" or "loose"). Label order follows the file.
struct ThresholdConfig {
  std::string profile;
  std::vector<LabelConfig> labels;

  const LabelConfig& at(const std::string& label) const;
  std::vector<std::string> label_order() const;
};

ThresholdConfig read_thresholds_json(const std::filesystem::path& path);
ThresholdConfig read_thresholds_json(std::istream& in);

struct ScoredSpan {
  std::size_t start = 0;
  std::size_t end = 0;
  std::string label;
  double score = 0.0;

  Span span() const { return {start, end}; }
  friend bool operator==(const ScoredSpan&, const ScoredSpan&) = default;
};

// Which member of a same-label crossing pair survives filtering.
enum class OverlapKeep { kLower, kHigher };

// All (s, t) satisfying the constraint, ordered by (s, t). The whole-sentence
// span is never a candidate. `tagged` must carry POS tags.
std::vector<Span> select_candidates(const LabeledTree& tagged, const PosConstraint& constraint);

std::vector<ScoredSpan> score_candidates(const std::vector<Span>& candidates, const std::string& label,
                                         const TokenizedSentence& sentence, SpanScorer& scorer);

// Drops every span that crosses an accepted one; nesting and disjoint spans stay.
std::vector<ScoredSpan> remove_conflicts(const std::vector<ScoredSpan>& spans,
                                         const std::vector<ScoredSpan>& accepted);

// Threshold, then same-label overlap resolution. Spans are visited best
// first (ascending score for kLower, ties by (s, t)); a span is dropped when
// it crosses a kept span, or is nested with one whose score differs by at
// least the tolerance. Output is in visiting order.
std::vector<ScoredSpan> filter_spans(const std::vector<ScoredSpan>& spans, const LabelConfig& config,
                                     OverlapKeep keep = OverlapKeep::kLower);

struct LsgSetup {
  ConstraintTable constraints;
  ThresholdConfig thresholds;
  // Empty means the thresholds file order.
  std::vector<std::string> label_order;
  OverlapKeep overlap_keep = OverlapKeep::kLower;
};

// Runs select -> score -> remove_conflicts -> filter per label, accumulating
// survivors. Labels without a constraint entry are unconstrained.
std::vector<ScoredSpan> parse_sentence(const LabeledTree& tagged, const TokenizedSentence& sentence,
                                       const LsgSetup& setup, SpanScorer& scorer);

LabeledTree spans_to_tree(const LabeledTree& tagged, const std::vector<ScoredSpan>& spans);

}  // namespace dpndd
