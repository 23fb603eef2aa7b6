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

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "dpndd/distribution.hpp"
#include "dpndd/distribution_cache.hpp"

namespace dpndd {

// Front door for masked-LM distributions: consults the cache first, sends
// the misses to the backend in batches and records what comes back.
//
// Safe to share between threads.
class DistributionProvider {
 public:
  // Backend with optional cache; a null cache disables caching entirely.
  explicit DistributionProvider(std::shared_ptr<DistributionBackend> backend,
                                std::shared_ptr<DistributionCache> cache = nullptr);
  // Cache-only provider (offline runs against a dumped cache).
  DistributionProvider(std::shared_ptr<DistributionCache> cache, std::string backend_id,
                       std::size_t vocab_size);
  // Both; the backend identifier must match backend_id when given.
  DistributionProvider(std::shared_ptr<DistributionBackend> backend,
                       std::shared_ptr<DistributionCache> cache, std::string backend_id,
                       std::size_t vocab_size);

  TokenDistribution get_distribution(const MaskQuery& query);
  // All-or-nothing: every query is validated before anything is fetched.
  std::vector<TokenDistribution> get_distributions_batch(std::span<const MaskQuery> queries);

  std::size_t vocab_size() const { return vocab_size_; }
  const std::string& backend_id() const { return backend_id_; }
  const DistributionCache* cache() const { return cache_.get(); }

 private:
  std::shared_ptr<DistributionBackend> backend_;
  std::shared_ptr<DistributionCache> cache_;
  std::string backend_id_;
  std::size_t vocab_size_ = 0;
};

}  // namespace dpndd
