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
#include <set>
#include <string>
#include <vector>

#include "dpndd/distribution_provider.hpp"
#include "dpndd/pos_projection.hpp"
#include "dpndd/tokenizer.hpp"

namespace dpndd {

// Reference sentence with a marked constituent: (W, i, j, l). Indices are
// 1-based, inclusive, over words.
struct Mold {
  std::vector<std::string> words;
  std::size_t start = 0;
  std::size_t end = 0;
  std::string label;
  bool utl = false;  // part of the reduced set used for tree labeling

  friend bool operator==(const Mold&, const Mold&) = default;
};

// JSON array of {"tokens": [...], "start": i, "end": j, "label": l, "utl": bool}.
std::vector<Mold> read_molds_json(const std::filesystem::path& path);
std::vector<Mold> read_molds_json(std::istream& in);
void write_molds_json(std::ostream& out, const std::vector<Mold>& molds);

// A mold with its subword expansion, computed once at registry load.
struct PreparedMold {
  Mold mold;
  TokenizedSentence sentence;
  std::size_t sub_start = 0;  // 1-based inclusive subword range of the span
  std::size_t sub_end = 0;
  std::vector<TokenId> span_ids;
};

enum class MoldSelection { kAll, kUtlFlagged };

struct MoldRegistryOptions {
  std::size_t max_molds = 25;
  // Empty means any label is accepted.
  std::set<std::string> allowed_labels;
};

class MoldRegistry {
 public:
  // Throws kConfig on an invalid mold or when the cap is exceeded.
  MoldRegistry(const std::vector<Mold>& molds, const SubwordTokenizer& tokenizer,
               MoldRegistryOptions options = {});

  // Labels in order of first appearance.
  const std::vector<std::string>& labels() const { return labels_; }
  bool has_label(const std::string& label) const { return by_label_.contains(label); }
  std::size_t size() const { return molds_.size(); }

  // kUtlFlagged falls back to every mold of the label when none is flagged.
  // Throws kNoMoldForLabel.
  std::vector<const PreparedMold*> select(const std::string& label,
                                          MoldSelection selection = MoldSelection::kAll) const;

 private:
  std::vector<PreparedMold> molds_;
  std::vector<std::string> labels_;
  std::map<std::string, std::vector<std::size_t>> by_label_;
};

// POS-NDD of putting V[s..t] into the mold's slot (the mold sentence is the
// one being disturbed).
double to_mold_score(const PreparedMold& mold, const TokenizedSentence& sentence, std::size_t s,
                     std::size_t t, DistributionProvider& provider, const PosProjection* projection);

// POS-NDD of putting the mold span into V's slot (s..t).
double from_mold_score(const PreparedMold& mold, const TokenizedSentence& sentence, std::size_t s,
                       std::size_t t, DistributionProvider& provider, const PosProjection* projection);

// min over the label's molds of to_mold + from_mold.
double dp_ndd(const std::string& label, const TokenizedSentence& sentence, std::size_t s,
              std::size_t t, const MoldRegistry& registry, DistributionProvider& provider,
              const PosProjection* projection, MoldSelection selection = MoldSelection::kAll);

// Scores a word span of a sentence for one label; lower is more
// constituent-like. The parsers only see this interface.
class SpanScorer {
 public:
  virtual ~SpanScorer() = default;
  virtual double score(const std::string& label, const TokenizedSentence& sentence, std::size_t s,
                       std::size_t t) = 0;
};

struct DpNddScorerOptions {
  MoldSelection selection = MoldSelection::kAll;
  // A span covering the whole sentence leaves nothing to compare on the
  // From-Mold side; score it with To-Mold alone instead of failing.
  bool whole_sentence_to_mold_only = false;
};

class DpNddScorer final : public SpanScorer {
 public:
  DpNddScorer(const MoldRegistry& registry, DistributionProvider& provider,
              const PosProjection* projection, DpNddScorerOptions options = {})
      : registry_(registry), provider_(provider), projection_(projection), options_(options) {}

  double score(const std::string& label, const TokenizedSentence& sentence, std::size_t s,
               std::size_t t) override;

 private:
  const MoldRegistry& registry_;
  DistributionProvider& provider_;
  const PosProjection* projection_;
  DpNddScorerOptions options_;
};

}  // namespace dpndd
