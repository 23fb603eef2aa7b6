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

#include <array>
#include <atomic>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "dpndd/distribution.hpp"

namespace dpndd {

// SHA-256 over (backend identifier, masked_index, token ids). See
// cache_key_bytes() for the exact byte layout.
using CacheKey = std::array<std::uint8_t, 32>;

std::vector<std::uint8_t> cache_key_bytes(std::string_view backend_id, const MaskQuery& query);
CacheKey cache_key(std::string_view backend_id, const MaskQuery& query);
std::string to_hex(const CacheKey& key);

struct CacheKeyHash {
  std::size_t operator()(const CacheKey& k) const noexcept;
};

// Append-only store of distributions keyed by CacheKey.
//
// File layout (all integers little-endian):
//   header  : "DPNDDCA1" | u32 version (=1) | u32 reserved (=0)
//   record* : key[32] | u32 length | f32 probs[length] | u32 crc32(key..probs)
//
// A record whose checksum does not match raises CorruptCache on open. An
// incomplete trailing record (interrupted write) is dropped and overwritten
// by the next append.
class DistributionCache {
 public:
  // Purely in-memory cache.
  DistributionCache() = default;
  // File-backed cache; the file is created when missing.
  explicit DistributionCache(const std::filesystem::path& path);

  DistributionCache(const DistributionCache&) = delete;
  DistributionCache& operator=(const DistributionCache&) = delete;

  std::optional<TokenDistribution> lookup(const CacheKey& key) const;
  // Returns false when the key was already present (the stored value wins).
  bool insert(const CacheKey& key, const TokenDistribution& dist);
  bool contains(const CacheKey& key) const;

  std::size_t size() const;
  std::size_t hits() const { return hits_.load(); }
  std::size_t misses() const { return misses_.load(); }
  const std::optional<std::filesystem::path>& path() const { return path_; }

 private:
  void load_index();

  std::optional<std::filesystem::path> path_;
  mutable std::mutex mutex_;
  mutable std::fstream file_;
  std::uint64_t valid_end_ = 0;
  bool truncate_pending_ = false;
  std::unordered_map<CacheKey, std::uint64_t, CacheKeyHash> offsets_;
  std::unordered_map<CacheKey, std::vector<float>, CacheKeyHash> memory_;
  mutable std::atomic<std::size_t> hits_{0};
  mutable std::atomic<std::size_t> misses_{0};
};

}  // namespace dpndd
