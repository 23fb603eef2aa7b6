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

#include "dpndd/distribution_cache.hpp"

#include <openssl/evp.h>
#include <zlib.h>

#include <bit>
#include <cstring>
#include <iostream>

#include "dpndd/error.hpp"

namespace dpndd {

namespace {

constexpr char kMagic[8] = {'D', 'P', 'N', 'D', 'D', 'C', 'A', '1'};
constexpr std::uint32_t kVersion = 1;
constexpr std::uint64_t kHeaderSize = 16;

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t get_u32(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint32_t crc(const std::uint8_t* data, std::size_t n, std::uint32_t seed = 0) {
  // zlib takes uInt lengths; records are far below 4 GiB.
  return static_cast<std::uint32_t>(::crc32(seed, data, static_cast<uInt>(n)));
}

std::vector<std::uint8_t> encode_record(const CacheKey& key, std::span<const float> probs) {
  std::vector<std::uint8_t> out;
  out.reserve(key.size() + 8 + probs.size() * 4);
  out.insert(out.end(), key.begin(), key.end());
  put_u32(out, static_cast<std::uint32_t>(probs.size()));
  for (float f : probs) put_u32(out, std::bit_cast<std::uint32_t>(f));
  put_u32(out, crc(out.data(), out.size()));
  return out;
}

std::vector<float> decode_floats(const std::uint8_t* p, std::size_t n) {
  std::vector<float> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = std::bit_cast<float>(get_u32(p + 4 * i));
  return out;
}

}  // namespace

std::vector<std::uint8_t> cache_key_bytes(std::string_view backend_id, const MaskQuery& query) {
  std::vector<std::uint8_t> bytes(backend_id.begin(), backend_id.end());
  bytes.push_back(0);
  put_u32(bytes, static_cast<std::uint32_t>(query.masked_index));
  put_u32(bytes, static_cast<std::uint32_t>(query.tokens.size()));
  for (TokenId t : query.tokens) put_u32(bytes, static_cast<std::uint32_t>(t));
  return bytes;
}

CacheKey cache_key(std::string_view backend_id, const MaskQuery& query) {
  const auto bytes = cache_key_bytes(backend_id, query);
  CacheKey key{};
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), key.data(), &len, EVP_sha256(), nullptr) != 1 ||
      len != key.size()) {
    throw Error(ErrorCode::kIo, "SHA-256 digest failed");
  }
  return key;
}

std::string to_hex(const CacheKey& key) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(64);
  for (auto b : key) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0xf]);
  }
  return out;
}

std::size_t CacheKeyHash::operator()(const CacheKey& k) const noexcept {
  std::size_t h;
  std::memcpy(&h, k.data(), sizeof(h));
  return h;
}

DistributionCache::DistributionCache(const std::filesystem::path& path) : path_(path) {
  if (!std::filesystem::exists(path)) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream create(path, std::ios::binary);
    std::vector<std::uint8_t> header(kMagic, kMagic + 8);
    put_u32(header, kVersion);
    put_u32(header, 0);
    create.write(reinterpret_cast<const char*>(header.data()), static_cast<std::streamsize>(header.size()));
    if (!create) throw Error(ErrorCode::kIo, "cannot create cache file " + path.string());
  }
  file_.open(path, std::ios::in | std::ios::out | std::ios::binary);
  if (!file_) throw Error(ErrorCode::kIo, "cannot open cache file " + path.string());
  load_index();
}

void DistributionCache::load_index() {
  const auto file_size = std::filesystem::file_size(*path_);
  std::uint8_t header[kHeaderSize];
  file_.seekg(0);
  file_.read(reinterpret_cast<char*>(header), kHeaderSize);
  if (!file_ || std::memcmp(header, kMagic, 8) != 0) {
    throw Error(ErrorCode::kCorruptCache, path_->string() + ": bad header");
  }
  if (get_u32(header + 8) != kVersion) {
    throw Error(ErrorCode::kCorruptCache, path_->string() + ": unsupported version");
  }

  std::uint64_t offset = kHeaderSize;
  std::vector<std::uint8_t> buf;
  while (offset < file_size) {
    if (file_size - offset < 36) break;
    buf.resize(36);
    file_.seekg(static_cast<std::streamoff>(offset));
    file_.read(reinterpret_cast<char*>(buf.data()), 36);
    const std::uint64_t length = get_u32(buf.data() + 32);
    const std::uint64_t record_size = 36 + 4 * length + 4;
    if (file_size - offset < record_size) break;
    buf.resize(record_size);
    file_.read(reinterpret_cast<char*>(buf.data() + 36), static_cast<std::streamsize>(record_size - 36));
    if (!file_) throw Error(ErrorCode::kIo, path_->string() + ": read failed");
    const std::uint32_t stored = get_u32(buf.data() + record_size - 4);
    if (crc(buf.data(), record_size - 4) != stored) {
      throw Error(ErrorCode::kCorruptCache,
                  path_->string() + ": checksum mismatch at offset " + std::to_string(offset));
    }
    CacheKey key;
    std::memcpy(key.data(), buf.data(), key.size());
    offsets_.emplace(key, offset);
    offset += record_size;
  }
  valid_end_ = offset;
  if (valid_end_ != file_size) {
    std::cerr << "dpndd: dropping incomplete trailing record in " << path_->string() << "\n";
    truncate_pending_ = true;
  }
  file_.clear();
}

std::optional<TokenDistribution> DistributionCache::lookup(const CacheKey& key) const {
  std::lock_guard lock(mutex_);
  if (!path_) {
    auto it = memory_.find(key);
    if (it == memory_.end()) {
      ++misses_;
      return std::nullopt;
    }
    ++hits_;
    return TokenDistribution(it->second);
  }
  auto it = offsets_.find(key);
  if (it == offsets_.end()) {
    ++misses_;
    return std::nullopt;
  }
  std::uint8_t len_bytes[4];
  file_.seekg(static_cast<std::streamoff>(it->second + 32));
  file_.read(reinterpret_cast<char*>(len_bytes), 4);
  const std::size_t length = get_u32(len_bytes);
  std::vector<std::uint8_t> raw(4 * length);
  file_.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (!file_) {
    file_.clear();
    throw Error(ErrorCode::kIo, path_->string() + ": read failed");
  }
  ++hits_;
  return TokenDistribution(decode_floats(raw.data(), length));
}

bool DistributionCache::contains(const CacheKey& key) const {
  std::lock_guard lock(mutex_);
  return path_ ? offsets_.contains(key) : memory_.contains(key);
}

bool DistributionCache::insert(const CacheKey& key, const TokenDistribution& dist) {
  std::lock_guard lock(mutex_);
  if (!path_) {
    return memory_.emplace(key, std::vector<float>(dist.probs().begin(), dist.probs().end())).second;
  }
  if (offsets_.contains(key)) return false;
  if (truncate_pending_) {
    file_.close();
    std::filesystem::resize_file(*path_, valid_end_);
    file_.open(*path_, std::ios::in | std::ios::out | std::ios::binary);
    truncate_pending_ = false;
  }
  const auto record = encode_record(key, dist.probs());
  file_.seekp(static_cast<std::streamoff>(valid_end_));
  file_.write(reinterpret_cast<const char*>(record.data()), static_cast<std::streamsize>(record.size()));
  file_.flush();
  if (!file_) throw Error(ErrorCode::kIo, path_->string() + ": write failed");
  offsets_.emplace(key, valid_end_);
  valid_end_ += record.size();
  return true;
}

std::size_t DistributionCache::size() const {
  std::lock_guard lock(mutex_);
  return path_ ? offsets_.size() : memory_.size();
}

}  // namespace dpndd
