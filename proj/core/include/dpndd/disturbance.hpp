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

#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "dpndd/distribution_provider.hpp"
#include "dpndd/pos_projection.hpp"
#include "dpndd/tokenizer.hpp"
#include "dpndd/treebank.hpp"

namespace dpndd {

struct SpanRef {
  std::size_t sentence = 0;  // index into SpanCorpus::sentences
  std::size_t start = 0;     // word span, 1-based inclusive
  std::size_t end = 0;
};

struct SpanCorpus {
  std::vector<TokenizedSentence> sentences;
  std::vector<std::string> labels;  // in the requested order
  std::map<std::string, std::vector<SpanRef>> spans;
};

// Collects spans with the given labels (all labels, sorted, when empty).
// Whole-sentence spans are skipped since substituting them leaves nothing to compare.
SpanCorpus build_span_corpus(const std::vector<LabeledTree>& trees, const SubwordTokenizer& tokenizer,
                             const std::vector<std::string>& labels = {});

// Chooses (host index, donor index) pairs for one cell.
class PairSampler {
 public:
  virtual ~PairSampler() = default;
  virtual std::vector<std::pair<std::size_t, std::size_t>> sample(std::size_t hosts, std::size_t donors,
                                                                   bool same_label, std::size_t size,
                                                                   std::mt19937_64& rng) const = 0;
};

// Distinct pairs drawn uniformly without replacement; a span is never paired
// with itself on the diagonal. Every pair is used when there are at most `size`.
class UniformPairSampler final : public PairSampler {
 public:
  std::vector<std::pair<std::size_t, std::size_t>> sample(std::size_t hosts, std::size_t donors, bool same_label,
                                                           std::size_t size,
                                                           std::mt19937_64& rng) const override;
};

// Pairs each span with itself: (0,0), (1,1), ...
class SelfPairSampler final : public PairSampler {
 public:
  std::vector<std::pair<std::size_t, std::size_t>> sample(std::size_t hosts, std::size_t donors, bool same_label,
                                                           std::size_t size,
                                                           std::mt19937_64& rng) const override;
};

enum class DisturbanceMetric { kNdd, kPosNdd };

struct DisturbanceOptions {
  std::size_t size = 2000;
  DisturbanceMetric metric = DisturbanceMetric::kPosNdd;
  std::uint64_t seed = 0;
  std::size_t workers = 1;
  const PairSampler* sampler = nullptr;  // UniformPairSampler when null
};

struct DisturbanceMatrix {
  std::vector<std::string> labels;
  // mean[a][b]: average divergence when a span of b replaces a span of a.
  std::vector<std::vector<double>> mean;
  std::vector<std::vector<std::size_t>> samples;
};

// Throws kInsufficientSpans when a label has fewer than two spans, and
// kConfig for kPosNdd without a projection.
DisturbanceMatrix disturbance_matrix(const SpanCorpus& corpus, DistributionProvider& provider,
                                     const PosProjection* projection, const DisturbanceOptions& options);

void write_disturbance_csv(std::ostream& out, const DisturbanceMatrix& matrix);
void write_sample_counts_csv(std::ostream& out, const DisturbanceMatrix& matrix);

}  // namespace dpndd
