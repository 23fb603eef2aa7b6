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

#include "dpndd/disturbance.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <set>

#include "dpndd/error.hpp"
#include "dpndd/ndd.hpp"
#include "dpndd/parallel.hpp"

namespace dpndd {

SpanCorpus build_span_corpus(const std::vector<LabeledTree>& trees, const SubwordTokenizer& tokenizer,
                             const std::vector<std::string>& labels) {
  SpanCorpus corpus;
  if (labels.empty()) {
    std::set<std::string> seen;
    for (const auto& t : trees) {
      for (const auto& s : t.spans) seen.insert(s.label);
    }
    corpus.labels.assign(seen.begin(), seen.end());
  } else {
    corpus.labels = labels;
  }
  for (const auto& l : corpus.labels) corpus.spans[l];

  for (const auto& tree : trees) {
    std::vector<SpanRef> refs;
    std::vector<std::string> owners;
    const std::size_t n = tree.words.size();
    for (const auto& s : tree.spans) {
      if (s.start == 1 && s.end == n) continue;
      if (!corpus.spans.contains(s.label)) continue;
      refs.push_back({corpus.sentences.size(), s.start, s.end});
      owners.push_back(s.label);
    }
    if (refs.empty()) continue;
    corpus.sentences.push_back(tokenize_sentence(tree.words, tokenizer));
    for (std::size_t i = 0; i < refs.size(); ++i) corpus.spans[owners[i]].push_back(refs[i]);
  }
  return corpus;
}

std::vector<std::pair<std::size_t, std::size_t>> UniformPairSampler::sample(std::size_t hosts, std::size_t donors,
                                                                            bool same_label, std::size_t size,
                                                                            std::mt19937_64& rng) const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  const std::size_t total = hosts * donors - (same_label ? std::min(hosts, donors) : 0);
  if (total <= size) {
    for (std::size_t i = 0; i < hosts; ++i) {
      for (std::size_t j = 0; j < donors; ++j) {
        if (!(same_label && i == j)) out.emplace_back(i, j);
      }
    }
    return out;
  }
  std::uniform_int_distribution<std::size_t> pick_host(0, hosts - 1);
  std::uniform_int_distribution<std::size_t> pick_donor(0, donors - 1);
  std::set<std::pair<std::size_t, std::size_t>> taken;
  while (out.size() < size) {
    const std::pair<std::size_t, std::size_t> p{pick_host(rng), pick_donor(rng)};
    if (same_label && p.first == p.second) continue;
    if (taken.insert(p).second) out.push_back(p);
  }
  return out;
}

std::vector<std::pair<std::size_t, std::size_t>> SelfPairSampler::sample(std::size_t hosts, std::size_t donors,
                                                                         bool, std::size_t size,
                                                                         std::mt19937_64&) const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < std::min({hosts, donors, size}); ++i) out.emplace_back(i, i);
  return out;
}

DisturbanceMatrix disturbance_matrix(const SpanCorpus& corpus, DistributionProvider& provider,
                                     const PosProjection* projection, const DisturbanceOptions& options) {
  if (options.metric == DisturbanceMetric::kPosNdd && !projection) {
    throw Error(ErrorCode::kConfig, "POS-NDD disturbance needs a POS projection");
  }
  for (const auto& l : corpus.labels) {
    const auto it = corpus.spans.find(l);
    const std::size_t count = it == corpus.spans.end() ? 0 : it->second.size();
    if (count < 2) {
      throw Error(ErrorCode::kInsufficientSpans,
                  "label " + l + " has " + std::to_string(count) + " usable spans, need at least 2");
    }
  }
  const UniformPairSampler uniform;
  const PairSampler& sampler = options.sampler ? *options.sampler : uniform;
  const PosProjection* proj = options.metric == DisturbanceMetric::kPosNdd ? projection : nullptr;

  const std::size_t k = corpus.labels.size();
  DisturbanceMatrix m;
  m.labels = corpus.labels;
  m.mean.assign(k, std::vector<double>(k, 0.0));
  m.samples.assign(k, std::vector<std::size_t>(k, 0));

  parallel_for(k * k, options.workers, [&](std::size_t cell) {
    const std::size_t a = cell / k;
    const std::size_t b = cell % k;
    const auto& hosts = corpus.spans.at(corpus.labels[a]);
    const auto& donors = corpus.spans.at(corpus.labels[b]);
    std::seed_seq seq{static_cast<std::uint32_t>(options.seed), static_cast<std::uint32_t>(options.seed >> 32),
                      static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b)};
    std::mt19937_64 rng(seq);
    const auto pairs = sampler.sample(hosts.size(), donors.size(), a == b, options.size, rng);

    double sum = 0.0;
    for (const auto& [i, j] : pairs) {
      const SpanRef& h = hosts[i];
      const SpanRef& d = donors[j];
      const TokenizedSentence& host = corpus.sentences[h.sentence];
      const auto [s, t] = host.subword_span(h.start, h.end);
      Substitution sub{host.ids, s, t, corpus.sentences[d.sentence].subword_slice(d.start, d.end)};
      sum += ndd(sub, provider, proj);
    }
    m.samples[a][b] = pairs.size();
    m.mean[a][b] = pairs.empty() ? 0.0 : sum / static_cast<double>(pairs.size());
  });
  return m;
}

void write_disturbance_csv(std::ostream& out, const DisturbanceMatrix& matrix) {
  out << "host\\donor";
  for (const auto& l : matrix.labels) out << ',' << l;
  out << '\n';
  char buf[32];
  for (std::size_t a = 0; a < matrix.labels.size(); ++a) {
    out << matrix.labels[a];
    for (double v : matrix.mean[a]) {
      std::snprintf(buf, sizeof buf, "%.6f", v);
      out << ',' << buf;
    }
    out << '\n';
  }
}

void write_sample_counts_csv(std::ostream& out, const DisturbanceMatrix& matrix) {
  out << "host\\donor";
  for (const auto& l : matrix.labels) out << ',' << l;
  out << '\n';
  for (std::size_t a = 0; a < matrix.labels.size(); ++a) {
    out << matrix.labels[a];
    for (auto v : matrix.samples[a]) out << ',' << v;
    out << '\n';
  }
}

}  // namespace dpndd
