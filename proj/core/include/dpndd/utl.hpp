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

#include <map>
#include <string>
#include <vector>

#include "dpndd/mold.hpp"
#include "dpndd/tokenizer.hpp"
#include "dpndd/treebank.hpp"

namespace dpndd {

// Smoothed p(label | POS) tables for the first and the last word of a span.
class PosPrior {
 public:
  PosPrior(std::vector<std::string> labels, double smoothing,
           std::map<std::string, std::map<std::string, std::size_t>> start_counts,
           std::map<std::string, std::map<std::string, std::size_t>> end_counts);

  // Uniform over labels for a POS never seen in that position.
  double start_prob(const std::string& label, const std::string& pos) const;
  double end_prob(const std::string& label, const std::string& pos) const;
  // alpha = p(l | POS(V[s])) * p(l | POS(V[t]))
  double alpha(const std::string& label, const std::string& start_pos, const std::string& end_pos) const;

  const std::vector<std::string>& labels() const { return labels_; }
  double smoothing() const { return smoothing_; }

 private:
  using Counts = std::map<std::string, std::map<std::string, std::size_t>>;  // pos -> label -> n
  double prob(const Counts& counts, const std::string& label, const std::string& pos) const;

  std::vector<std::string> labels_;
  double smoothing_;
  Counts start_;
  Counts end_;
};

// p(l|POS) = (count(l, POS) + k) / (count(POS) + k |L|), counted over spans
// whose label is in `labels`. Throws kEmptyTreebank.
PosPrior estimate_priors(const std::vector<LabeledTree>& treebank, const std::vector<std::string>& labels,
                         double smoothing = 1.0);

// argmin_l S^l, or argmax_l alpha_l e^{-S^l} with priors. `scores` is
// parallel to `labels`; ties go to the earlier label.
std::string choose_label(const std::vector<std::string>& labels, const std::vector<double>& scores,
                         const PosPrior* priors = nullptr, const std::string& start_pos = {},
                         const std::string& end_pos = {});

struct UtlOptions {
  std::vector<std::string> labels;  // candidate labels, in tie-break order
  const PosPrior* priors = nullptr;
  std::size_t workers = 1;
};

std::string label_span(const LabeledTree& tagged, const TokenizedSentence& sentence, std::size_t s,
                       std::size_t t, SpanScorer& scorer, const UtlOptions& options);

// Relabels every span; the span structure is left exactly as given.
// `sentences` holds the tokenisation of each tree.
std::vector<LabeledTree> label_treebank(const std::vector<LabeledTree>& unlabeled,
                                        const std::vector<TokenizedSentence>& sentences,
                                        SpanScorer& scorer, const UtlOptions& options);

}  // namespace dpndd
