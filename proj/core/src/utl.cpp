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

#include "dpndd/utl.hpp"

#include <cmath>
#include <limits>
#include <set>

#include "dpndd/error.hpp"
#include "dpndd/parallel.hpp"

namespace dpndd {

PosPrior::PosPrior(std::vector<std::string> labels, double smoothing, Counts start_counts,
                   Counts end_counts)
    : labels_(std::move(labels)),
      smoothing_(smoothing),
      start_(std::move(start_counts)),
      end_(std::move(end_counts)) {
  if (labels_.empty()) throw Error(ErrorCode::kConfig, "priors need at least one label");
  if (smoothing_ < 0.0) throw Error(ErrorCode::kConfig, "smoothing must be non-negative");
}

double PosPrior::prob(const Counts& counts, const std::string& label, const std::string& pos) const {
  const double num_labels = static_cast<double>(labels_.size());
  auto it = counts.find(pos);
  if (it == counts.end()) return 1.0 / num_labels;
  std::size_t total = 0;
  for (const auto& [l, n] : it->second) total += n;
  auto hit = it->second.find(label);
  const double count = hit == it->second.end() ? 0.0 : static_cast<double>(hit->second);
  const double denom = static_cast<double>(total) + smoothing_ * num_labels;
  if (denom <= 0.0) return 1.0 / num_labels;
  return (count + smoothing_) / denom;
}

double PosPrior::start_prob(const std::string& label, const std::string& pos) const {
  return prob(start_, label, pos);
}

double PosPrior::end_prob(const std::string& label, const std::string& pos) const {
  return prob(end_, label, pos);
}

double PosPrior::alpha(const std::string& label, const std::string& start_pos,
                       const std::string& end_pos) const {
  return start_prob(label, start_pos) * end_prob(label, end_pos);
}

PosPrior estimate_priors(const std::vector<LabeledTree>& treebank, const std::vector<std::string>& labels,
                         double smoothing) {
  if (treebank.empty()) throw Error(ErrorCode::kEmptyTreebank, "cannot estimate priors from nothing");
  const std::set<std::string> wanted(labels.begin(), labels.end());
  std::map<std::string, std::map<std::string, std::size_t>> start;
  std::map<std::string, std::map<std::string, std::size_t>> end;
  for (const auto& tree : treebank) {
    if (tree.pos.size() != tree.words.size()) continue;
    for (const auto& s : tree.spans) {
      if (!wanted.contains(s.label)) continue;
      ++start[tree.pos[s.start - 1]][s.label];
      ++end[tree.pos[s.end - 1]][s.label];
    }
  }
  return PosPrior(labels, smoothing, std::move(start), std::move(end));
}

std::string choose_label(const std::vector<std::string>& labels, const std::vector<double>& scores,
                         const PosPrior* priors, const std::string& start_pos,
                         const std::string& end_pos) {
  if (labels.empty() || labels.size() != scores.size()) {
    throw Error(ErrorCode::kConfig, "label and score lists must be non-empty and parallel");
  }
  std::size_t best = 0;
  double best_value = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < labels.size(); ++i) {
    // log(alpha e^{-S}) keeps the comparison finite for large S.
    double value = -scores[i];
    if (priors) value += std::log(priors->alpha(labels[i], start_pos, end_pos));
    if (i == 0 || value > best_value) {
      best = i;
      best_value = value;
    }
  }
  return labels[best];
}

std::string label_span(const LabeledTree& tagged, const TokenizedSentence& sentence, std::size_t s,
                       std::size_t t, SpanScorer& scorer, const UtlOptions& options) {
  std::vector<double> scores;
  scores.reserve(options.labels.size());
  for (const auto& label : options.labels) scores.push_back(scorer.score(label, sentence, s, t));
  if (!options.priors) return choose_label(options.labels, scores);
  if (tagged.pos.size() != tagged.words.size()) {
    throw Error(ErrorCode::kInvalidRange, "POS refinement needs POS tags");
  }
  return choose_label(options.labels, scores, options.priors, tagged.pos[s - 1], tagged.pos[t - 1]);
}

std::vector<LabeledTree> label_treebank(const std::vector<LabeledTree>& unlabeled,
                                        const std::vector<TokenizedSentence>& sentences,
                                        SpanScorer& scorer, const UtlOptions& options) {
  if (sentences.size() != unlabeled.size()) {
    throw Error(ErrorCode::kSentenceCountMismatch, "tokenisation count differs from treebank size");
  }
  std::vector<LabeledTree> out(unlabeled);
  parallel_for(out.size(), options.workers, [&](std::size_t i) {
    out[i].validate();
    for (auto& span : out[i].spans) {
      span.label = label_span(unlabeled[i], sentences[i], span.start, span.end, scorer, options);
    }
  });
  return out;
}

}  // namespace dpndd
