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

#include "dpndd/distribution_provider.hpp"

#include <algorithm>
#include <optional>
#include <unordered_map>

#include "dpndd/error.hpp"

namespace dpndd {

DistributionProvider::DistributionProvider(std::shared_ptr<DistributionBackend> backend,
                                           std::shared_ptr<DistributionCache> cache)
    : backend_(std::move(backend)), cache_(std::move(cache)) {
  if (!backend_) throw Error(ErrorCode::kConfig, "provider needs a backend or a cache");
  backend_id_ = backend_->identifier();
  vocab_size_ = backend_->vocab_size();
}

DistributionProvider::DistributionProvider(std::shared_ptr<DistributionCache> cache,
                                           std::string backend_id, std::size_t vocab_size)
    : cache_(std::move(cache)), backend_id_(std::move(backend_id)), vocab_size_(vocab_size) {
  if (!cache_) throw Error(ErrorCode::kConfig, "provider needs a backend or a cache");
  if (vocab_size_ == 0) throw Error(ErrorCode::kConfig, "vocabulary size must be positive");
}

DistributionProvider::DistributionProvider(std::shared_ptr<DistributionBackend> backend,
                                           std::shared_ptr<DistributionCache> cache,
                                           std::string backend_id, std::size_t vocab_size)
    : backend_(std::move(backend)),
      cache_(std::move(cache)),
      backend_id_(std::move(backend_id)),
      vocab_size_(vocab_size) {
  if (!backend_ && !cache_) throw Error(ErrorCode::kConfig, "provider needs a backend or a cache");
  if (backend_) {
    if (backend_id_.empty()) backend_id_ = backend_->identifier();
    if (vocab_size_ == 0) vocab_size_ = backend_->vocab_size();
    if (backend_->vocab_size() != vocab_size_) {
      throw Error(ErrorCode::kVocabMismatch,
                  "backend vocabulary " + std::to_string(backend_->vocab_size()) +
                      " differs from configured " + std::to_string(vocab_size_));
    }
  }
  if (vocab_size_ == 0) throw Error(ErrorCode::kConfig, "vocabulary size must be positive");
}

TokenDistribution DistributionProvider::get_distribution(const MaskQuery& query) {
  auto out = get_distributions_batch(std::span<const MaskQuery>(&query, 1));
  return std::move(out.front());
}

std::vector<TokenDistribution> DistributionProvider::get_distributions_batch(
    std::span<const MaskQuery> queries) {
  for (const auto& q : queries) q.validate();

  std::vector<std::optional<TokenDistribution>> slots(queries.size());
  std::vector<CacheKey> keys(queries.size());
  // Distinct cache misses, in first-seen order, and where each lands.
  std::vector<std::size_t> pending;
  std::unordered_map<CacheKey, std::vector<std::size_t>, CacheKeyHash> waiting;

  for (std::size_t i = 0; i < queries.size(); ++i) {
    keys[i] = cache_key(backend_id_, queries[i]);
    auto [it, fresh] = waiting.try_emplace(keys[i]);
    it->second.push_back(i);
    if (!fresh) continue;
    if (cache_) {
      if (auto hit = cache_->lookup(keys[i])) {
        if (hit->size() != vocab_size_) {
          throw Error(ErrorCode::kVocabMismatch,
                      "cached vector has length " + std::to_string(hit->size()));
        }
        slots[i] = std::move(*hit);
        continue;
      }
    }
    pending.push_back(i);
  }

  if (!pending.empty()) {
    if (!backend_) {
      throw Error(ErrorCode::kBackendUnavailable,
                  std::to_string(pending.size()) + " queries missing from cache and no backend configured");
    }
    const std::size_t chunk = std::max<std::size_t>(1, backend_->max_batch());
    for (std::size_t begin = 0; begin < pending.size(); begin += chunk) {
      const std::size_t end = std::min(pending.size(), begin + chunk);
      std::vector<MaskQuery> batch;
      batch.reserve(end - begin);
      for (std::size_t k = begin; k < end; ++k) batch.push_back(queries[pending[k]]);
      auto vectors = backend_->compute(batch);
      if (vectors.size() != batch.size()) {
        throw Error(ErrorCode::kBackendUnavailable, "backend returned a short batch");
      }
      for (std::size_t k = begin; k < end; ++k) {
        auto& v = vectors[k - begin];
        if (v.size() != vocab_size_) {
          throw Error(ErrorCode::kVocabMismatch, "backend returned " + std::to_string(v.size()) +
                                                     " probabilities, expected " +
                                                     std::to_string(vocab_size_));
        }
        slots[pending[k]] = TokenDistribution(std::move(v));
      }
    }
    // Insert only after the whole batch succeeded.
    if (cache_) {
      for (std::size_t i : pending) cache_->insert(keys[i], *slots[i]);
    }
  }

  std::vector<TokenDistribution> out(queries.size());
  for (auto& [key, indices] : waiting) {
    const std::size_t first = indices.front();
    for (std::size_t i : indices) out[i] = *slots[first];
  }
  return out;
}

}  // namespace dpndd
