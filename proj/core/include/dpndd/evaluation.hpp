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

#include <cstddef>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "dpndd/treebank.hpp"

namespace dpndd {

struct EvalOptions {
  // Length-1 and whole-sentence spans are dropped unless set.
  bool keep_trivial = false;
  // Punctuation tokens (by gold POS) are removed before matching.
  bool strip_punct = false;
  // Identical spans (or identical span+label pairs) count once. Off gives
  // plain multiset matching.
  bool collapse_duplicates = true;
};

struct LabelStats {
  std::size_t gold = 0;
  std::size_t predicted = 0;
  std::size_t matched = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// Fractions in [0, 1]; multiply by 100 for display. Counts are corpus-level.
struct F1Report {
  bool labeled = false;
  std::size_t gold = 0;
  std::size_t predicted = 0;
  std::size_t matched = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  // Labeled: per-label P/R/F1. Unlabeled: keyed by gold label, only `gold`,
  // `matched` and `recall` are meaningful.
  std::map<std::string, LabelStats> per_label;
};

// f1 = 2PR/(P+R), 0 when P+R = 0. P is 0 when nothing was predicted.
void finalize_stats(std::size_t gold, std::size_t predicted, std::size_t matched, double& precision,
                    double& recall, double& f1);

// Sentences align by index and must have the same words.
// Throws kSentenceCountMismatch, kTokenMismatch.
F1Report unlabeled_f1(const std::vector<LabeledTree>& predicted, const std::vector<LabeledTree>& gold,
                      const EvalOptions& options = {});
F1Report labeled_f1(const std::vector<LabeledTree>& predicted, const std::vector<LabeledTree>& gold,
                    const EvalOptions& options = {});

struct ConfusionMatrix {
  std::vector<std::string> labels;
  // counts[gold][predicted]
  std::vector<std::vector<std::size_t>> counts;

  std::size_t at(const std::string& gold, const std::string& predicted) const;
};

// Both treebanks must carry the same span multiset per sentence (the UTL
// setting). `labels` fixes the row/column order; labels seen in the data but
// not listed are appended in sorted order. Throws kSpanSetMismatch.
ConfusionMatrix confusion_matrix(const std::vector<LabeledTree>& predicted,
                                 const std::vector<LabeledTree>& gold,
                                 const std::vector<std::string>& labels = {});

std::string report_json(const F1Report& report);
void write_report_text(std::ostream& out, const F1Report& report);
std::string confusion_json(const ConfusionMatrix& matrix);
void write_confusion_csv(std::ostream& out, const ConfusionMatrix& matrix);

}  // namespace dpndd
