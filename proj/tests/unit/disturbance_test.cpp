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

#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "dpndd/error.hpp"
#include "fixtures.hpp"

namespace dpndd {
namespace {

LabeledTree tree(const std::string& text, std::vector<LabeledSpan> spans) {
  LabeledTree t;
  std::istringstream in(text);
  for (std::string w; in >> w;) t.words.push_back(w);
  t.spans = std::move(spans);
  return t;
}

class DisturbanceTest : public ::testing::Test {
 protected:
  std::shared_ptr<const Vocabulary> vocab = testing::word_vocab(
      {"a", "b", "c", "d", "e", "f", "g", "h", "i", "j", "k", "l", "m"});
  WordLevelTokenizer tok{vocab};
  std::vector<LabeledTree> trees = {
      tree("a b c d", {{1, 4, "S"}, {1, 2, "NP"}, {3, 4, "VP"}}),
      tree("e f g h", {{1, 2, "NP"}, {2, 4, "VP"}}),
      tree("i j k", {{1, 2, "NP"}}),
      tree("l m", {{1, 2, "NP"}}),
  };
};

TEST_F(DisturbanceTest, CorpusSkipsWholeSentenceSpans) {
  const auto corpus = build_span_corpus(trees, tok);
  EXPECT_EQ(corpus.labels, (std::vector<std::string>{"NP", "S", "VP"}));
  EXPECT_EQ(corpus.sentences.size(), 3u);
  EXPECT_EQ(corpus.spans.at("NP").size(), 3u);
  EXPECT_TRUE(corpus.spans.at("S").empty());
  EXPECT_EQ(corpus.spans.at("VP").size(), 2u);
  const auto np_only = build_span_corpus(trees, tok, {"NP"});
  EXPECT_EQ(np_only.labels, (std::vector<std::string>{"NP"}));
  EXPECT_FALSE(np_only.spans.contains("VP"));
}

TEST_F(DisturbanceTest, ConstantDivergenceFillsEveryCell) {
  const auto corpus = build_span_corpus(trees, tok, {"NP", "VP"});
  std::set<std::vector<TokenId>> originals;
  for (const auto& s : corpus.sentences) originals.insert(s.ids);
  auto backend = std::make_shared<CallbackBackend>("fixed", 2, [&](const MaskQuery& q) {
    for (const auto& o : originals) {
      if (o.size() != q.tokens.size()) continue;
      bool same = true;
      for (std::size_t k = 0; k < o.size(); ++k) same = same && (k == q.masked_index || o[k] == q.tokens[k]);
      if (same) return std::vector<float>{0.5f, 0.5f};
    }
    return std::vector<float>{0.9f, 0.1f};
  });
  DistributionProvider provider(backend);
  const double p0 = static_cast<double>(0.9f) / (static_cast<double>(0.9f) + static_cast<double>(0.1f));
  const double p1 = 1.0 - p0;
  const double delta = p0 * std::log(p0 / 0.5) + p1 * std::log(p1 / 0.5);

  const auto m = disturbance_matrix(corpus, provider, nullptr, {.metric = DisturbanceMetric::kNdd});
  for (std::size_t a = 0; a < 2; ++a) {
    for (std::size_t b = 0; b < 2; ++b) EXPECT_NEAR(m.mean[a][b], delta, 1e-9) << a << "," << b;
  }
}

TEST_F(DisturbanceTest, SelfPairsGiveZeroDiagonal) {
  const auto corpus = build_span_corpus(trees, tok, {"NP", "VP"});
  auto backend = std::make_shared<MockBackend>(MockBackendOptions{vocab->size(), 3});
  DistributionProvider provider(backend);
  const SelfPairSampler self;
  const auto m = disturbance_matrix(corpus, provider, nullptr,
                                    {.metric = DisturbanceMetric::kNdd, .sampler = &self});
  EXPECT_EQ(m.mean[0][0], 0.0);
  EXPECT_EQ(m.mean[1][1], 0.0);
  EXPECT_GT(m.mean[0][1], 0.0);
  EXPECT_EQ(m.samples[0][1], 2u);
}

TEST_F(DisturbanceTest, ExhaustiveCountsAndDeterminism) {
  const auto corpus = build_span_corpus(trees, tok, {"NP", "VP"});
  auto backend = std::make_shared<MockBackend>(MockBackendOptions{vocab->size(), 3});
  DistributionProvider provider(backend);
  const auto projection = build_projection({{"a", {"DT"}}, {"e", {"DT"}}, {"b", {"NN"}}}, vocab->entries());

  const auto all = disturbance_matrix(corpus, provider, &projection, {});
  EXPECT_EQ(all.samples, (std::vector<std::vector<std::size_t>>{{6, 6}, {6, 2}}));

  const DisturbanceOptions small{.size = 3, .seed = 42, .workers = 1};
  const auto once = disturbance_matrix(corpus, provider, &projection, small);
  EXPECT_EQ(once.samples, (std::vector<std::vector<std::size_t>>{{3, 3}, {3, 2}}));
  auto parallel = small;
  parallel.workers = 4;
  const auto again = disturbance_matrix(corpus, provider, &projection, parallel);
  EXPECT_EQ(once.mean, again.mean);
}

TEST_F(DisturbanceTest, Errors) {
  auto backend = std::make_shared<MockBackend>(MockBackendOptions{vocab->size(), 3});
  DistributionProvider provider(backend);
  auto corpus = build_span_corpus(trees, tok, {"NP", "S"});
  try {
    disturbance_matrix(corpus, provider, nullptr, {.metric = DisturbanceMetric::kNdd});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInsufficientSpans);
  }
  corpus = build_span_corpus(trees, tok, {"NP"});
  try {
    disturbance_matrix(corpus, provider, nullptr, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kConfig);
  }
}

TEST(UniformPairSampler, NoRepeatsNoSelfPairs) {
  const UniformPairSampler sampler;
  std::mt19937_64 rng(1);
  const auto pairs = sampler.sample(20, 20, true, 100, rng);
  EXPECT_EQ(pairs.size(), 100u);
  std::set<std::pair<std::size_t, std::size_t>> seen(pairs.begin(), pairs.end());
  EXPECT_EQ(seen.size(), pairs.size());
  for (const auto& [i, j] : pairs) {
    EXPECT_NE(i, j);
    EXPECT_LT(i, 20u);
    EXPECT_LT(j, 20u);
  }
  EXPECT_EQ(sampler.sample(3, 4, false, 100, rng).size(), 12u);
  EXPECT_EQ(sampler.sample(3, 3, true, 100, rng).size(), 6u);
}

TEST(DisturbanceCsv, Format) {
  DisturbanceMatrix m{{"NP", "VP"}, {{0.5, 1.25}, {2.0, 0.0}}, {{2, 3}, {4, 5}}};
  std::ostringstream mean;
  write_disturbance_csv(mean, m);
  EXPECT_EQ(mean.str(), "host\\donor,NP,VP\nNP,0.500000,1.250000\nVP,2.000000,0.000000\n");
  std::ostringstream counts;
  write_sample_counts_csv(counts, m);
  EXPECT_EQ(counts.str(), "host\\donor,NP,VP\nNP,2,3\nVP,4,5\n");
}

}  // namespace
}  // namespace dpndd
