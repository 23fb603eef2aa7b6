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

#include "dpndd/distribution.hpp"

#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "dpndd/distribution_cache.hpp"
#include "dpndd/distribution_provider.hpp"
#include "dpndd/error.hpp"
#include "oracle.hpp"

namespace dpndd {
namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::kConfig;
}

TEST(MaskQuery, Validation) {
  EXPECT_NO_THROW((MaskQuery{{1, 2}, 1}.validate()));
  EXPECT_EQ(code_of([] { MaskQuery{{}, 0}.validate(); }), ErrorCode::kInvalidQuery);
  EXPECT_EQ(code_of([] { MaskQuery{{1, 2}, 2}.validate(); }), ErrorCode::kInvalidQuery);
}

TEST(TokenDistribution, RejectsBadVectors) {
  EXPECT_NO_THROW(TokenDistribution({0.25f, 0.75f}));
  EXPECT_EQ(code_of([] { TokenDistribution({0.5f, 0.6f}); }), ErrorCode::kInvalidDistribution);
  EXPECT_EQ(code_of([] { TokenDistribution({1.5f, -0.5f}); }), ErrorCode::kInvalidDistribution);
}

TEST(MockBackend, UniformMode) {
  MockBackend backend({4, 0, 2, 3.0, true});
  DistributionProvider provider(std::make_shared<MockBackend>(MockBackendOptions{4, 0, 2, 3.0, true}));
  const auto d = provider.get_distribution({{1, 2, 3}, 1});
  EXPECT_EQ(std::vector<float>(d.probs().begin(), d.probs().end()), (std::vector<float>{0.25f, 0.25f, 0.25f, 0.25f}));
}

TEST(MockBackend, RandomQueriesAreNormalised) {
  MockBackend backend({50, 9});
  std::mt19937_64 rng(1);
  for (int i = 0; i < 10; ++i) {
    const auto tokens = testing::random_tokens(rng, 2 + rng() % 10, 50);
    const auto probs = backend.predict({tokens, rng() % tokens.size()});
    const double sum = std::accumulate(probs.begin(), probs.end(), 0.0);
    EXPECT_NEAR(sum, 1.0, 1e-4);
  }
}

TEST(MockBackend, IgnoresMaskedTokenAndDistantContext) {
  MockBackend backend({30, 2});
  const auto a = backend.predict({{1, 2, 3, 4, 5, 6, 7}, 3});
  EXPECT_EQ(a, backend.predict({{1, 2, 3, 9, 5, 6, 7}, 3}));
  EXPECT_EQ(a, backend.predict({{8, 2, 3, 4, 5, 6, 8}, 3}));
  EXPECT_NE(a, backend.predict({{1, 2, 9, 4, 5, 6, 7}, 3}));
}

TEST(DistributionProvider, SecondCallIsCacheHit) {
  auto backend = std::make_shared<MockBackend>(MockBackendOptions{20, 1});
  auto cache = std::make_shared<DistributionCache>();
  DistributionProvider provider(backend, cache);
  const MaskQuery q{{1, 2, 3, 4}, 2};
  const auto first = provider.get_distribution(q);
  EXPECT_EQ(cache->misses(), 1u);
  const auto second = provider.get_distribution(q);
  EXPECT_EQ(first, second);
  EXPECT_EQ(cache->hits(), 1u);
  EXPECT_EQ(backend->calls(), 1u);
}

TEST(DistributionProvider, EmptyBatch) {
  DistributionProvider provider(std::make_shared<MockBackend>());
  EXPECT_TRUE(provider.get_distributions_batch({}).empty());
}

TEST(DistributionProvider, BatchEqualsSequential) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    DistributionProvider batched(std::make_shared<MockBackend>(MockBackendOptions{25, 3}));
    DistributionProvider single(std::make_shared<MockBackend>(MockBackendOptions{25, 3}));
    std::vector<MaskQuery> queries;
    for (int i = 0; i < 1 + static_cast<int>(rng() % 6); ++i) {
      auto tokens = testing::random_tokens(rng, 1 + rng() % 6, 25);
      queries.push_back({tokens, rng() % tokens.size()});
    }
    queries.push_back(queries.front());
    const auto out = batched.get_distributions_batch(queries);
    ASSERT_EQ(out.size(), queries.size());
    for (std::size_t i = 0; i < queries.size(); ++i) EXPECT_EQ(out[i], single.get_distribution(queries[i]));
  }
}

TEST(DistributionProvider, InvalidQueryFailsWholeBatch) {
  auto backend = std::make_shared<MockBackend>();
  auto cache = std::make_shared<DistributionCache>();
  DistributionProvider provider(backend, cache);
  std::vector<MaskQuery> queries{{{1, 2}, 0}, {{1, 2}, 5}, {{3}, 0}};
  EXPECT_EQ(code_of([&] { provider.get_distributions_batch(queries); }), ErrorCode::kInvalidQuery);
  EXPECT_EQ(backend->calls(), 0u);
  EXPECT_EQ(cache->size(), 0u);
}

TEST(DistributionProvider, CacheIsTransparent) {
  std::mt19937_64 rng(8);
  DistributionProvider cached(std::make_shared<MockBackend>(MockBackendOptions{30, 4}),
                              std::make_shared<DistributionCache>());
  DistributionProvider plain(std::make_shared<MockBackend>(MockBackendOptions{30, 4}));
  for (int i = 0; i < 50; ++i) {
    auto tokens = testing::random_tokens(rng, 1 + rng() % 4, 30);
    const MaskQuery q{tokens, rng() % tokens.size()};
    const auto a = cached.get_distribution(q);
    const auto b = plain.get_distribution(q);
    for (std::size_t j = 0; j < a.size(); ++j) EXPECT_NEAR(a[j], b[j], 1e-9);
  }
}

TEST(DistributionProvider, VocabMismatch) {
  auto wrong = std::make_shared<CallbackBackend>("short", 4, [](const MaskQuery&) {
    return std::vector<float>{0.5f, 0.5f};
  });
  DistributionProvider provider(wrong);
  EXPECT_EQ(code_of([&] { provider.get_distribution({{1}, 0}); }), ErrorCode::kVocabMismatch);
  EXPECT_EQ(code_of([&] { DistributionProvider(wrong, nullptr, "short", 5); }), ErrorCode::kVocabMismatch);
}

TEST(DistributionProvider, CacheOnlyMissIsBackendUnavailable) {
  DistributionProvider provider(std::make_shared<DistributionCache>(), "offline", 8);
  EXPECT_EQ(code_of([&] { provider.get_distribution({{1, 2}, 0}); }), ErrorCode::kBackendUnavailable);
}

TEST(DistributionProvider, InvalidBackendOutputIsRejected) {
  auto bad = std::make_shared<CallbackBackend>("bad", 2, [](const MaskQuery&) {
    return std::vector<float>{0.9f, 0.9f};
  });
  DistributionProvider provider(bad);
  EXPECT_EQ(code_of([&] { provider.get_distribution({{1}, 0}); }), ErrorCode::kInvalidDistribution);
}

TEST(MakeBackend, ParsesEndpoints) {
  auto mock = make_backend("mock:12:5");
  EXPECT_EQ(mock->vocab_size(), 12u);
  EXPECT_EQ(mock->identifier(), "mock-5");
  EXPECT_EQ(make_backend("mock", {}, 7)->vocab_size(), 7u);
  EXPECT_EQ(code_of([] { make_backend("mock"); }), ErrorCode::kConfig);
  EXPECT_EQ(code_of([] { make_backend("mock:x"); }), ErrorCode::kConfig);
  EXPECT_EQ(code_of([] { make_backend("ftp://x"); }), ErrorCode::kConfig);
}

}  // namespace
}  // namespace dpndd
