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

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace dpndd {

using TokenId = std::int32_t;

// Sum tolerance accepted for a distribution coming off the wire or the cache.
inline constexpr double kDistributionSumTolerance = 1e-4;

// One masked-LM query: the token sequence with position `masked_index`
// replaced by the mask token on the backend side.
struct MaskQuery {
  std::vector<TokenId> tokens;
  std::size_t masked_index = 0;

  // Throws Error(kInvalidQuery) when tokens is empty or the index is out of range.
  void validate() const;

  friend bool operator==(const MaskQuery&, const MaskQuery&) = default;
};

// Probability vector over the model vocabulary at one masked position.
// Stored as float32 because that is the transport and cache precision.
class TokenDistribution {
 public:
  TokenDistribution() = default;
  // Validates non-negativity and that the mass sums to 1 within 1e-4.
  explicit TokenDistribution(std::vector<float> probs);

  std::span<const float> probs() const { return probs_; }
  std::size_t size() const { return probs_.size(); }
  float operator[](std::size_t i) const { return probs_[i]; }

  friend bool operator==(const TokenDistribution&, const TokenDistribution&) = default;

 private:
  std::vector<float> probs_;
};

// Something that can run the masked language model. Implementations must be
// safe to call from several threads at once.
class DistributionBackend {
 public:
  virtual ~DistributionBackend() = default;

  virtual std::string identifier() const = 0;
  virtual std::size_t vocab_size() const = 0;
  // Largest number of queries sent in one compute() call.
  virtual std::size_t max_batch() const { return 64; }
  // Raw vectors, one per query and in query order. Length and normalisation
  // are checked by the provider, not here.
  virtual std::vector<std::vector<float>> compute(std::span<const MaskQuery> queries) = 0;
};

struct MockBackendOptions {
  std::size_t vocab_size = 64;
  std::uint64_t seed = 0;
  // Neighbouring positions on each side that influence a prediction.
  std::size_t window = 2;
  double logit_scale = 3.0;
  bool uniform = false;
  std::string identifier = "mock";
};

// Deterministic stand-in for a masked LM. The prediction at the masked slot
// depends only on the tokens within `window` of it (never on the masked
// token itself), so edits far from a position leave it untouched.
class MockBackend final : public DistributionBackend {
 public:
  explicit MockBackend(MockBackendOptions options = {});

  std::string identifier() const override { return options_.identifier; }
  std::size_t vocab_size() const override { return options_.vocab_size; }
  std::vector<std::vector<float>> compute(std::span<const MaskQuery> queries) override;

  std::vector<float> predict(const MaskQuery& query) const;
  std::size_t calls() const { return calls_.load(); }

 private:
  MockBackendOptions options_;
  std::atomic<std::size_t> calls_{0};
};

// Adapts a plain function into a backend; handy for tests that need to pin
// exact vectors.
class CallbackBackend final : public DistributionBackend {
 public:
  using Fn = std::function<std::vector<float>(const MaskQuery&)>;

  CallbackBackend(std::string identifier, std::size_t vocab_size, Fn fn)
      : identifier_(std::move(identifier)), vocab_size_(vocab_size), fn_(std::move(fn)) {}

  std::string identifier() const override { return identifier_; }
  std::size_t vocab_size() const override { return vocab_size_; }
  std::vector<std::vector<float>> compute(std::span<const MaskQuery> queries) override;

 private:
  std::string identifier_;
  std::size_t vocab_size_;
  Fn fn_;
};

struct HttpBackendOptions {
  std::string endpoint;  // e.g. http://127.0.0.1:8000
  // When empty / zero they are read from GET /health.
  std::string identifier;
  std::size_t vocab_size = 0;
  std::size_t max_batch = 32;
  int timeout_seconds = 120;
};

// Client for the inference sidecar's JSON protocol:
//   POST /distribution   {"tokens": [...], "masked_index": i} -> {"probs": [...]}
//   POST /distributions  {"queries": [...]}                   -> {"results": [{"probs": [...]}, ...]}
//   GET  /health                                              -> {"vocab_size": c, "backend": id}
class HttpBackend final : public DistributionBackend {
 public:
  explicit HttpBackend(HttpBackendOptions options);

  std::string identifier() const override { return options_.identifier; }
  std::size_t vocab_size() const override { return options_.vocab_size; }
  std::size_t max_batch() const override { return options_.max_batch; }
  std::vector<std::vector<float>> compute(std::span<const MaskQuery> queries) override;

 private:
  HttpBackendOptions options_;
};

// Builds a backend from a URL-like string: "http://host:port" for the sidecar,
// "mock:<vocab_size>[:<seed>]" for the deterministic mock, or "mock" to take
// the size from `vocab_size`.
std::shared_ptr<DistributionBackend> make_backend(const std::string& endpoint,
                                                  const std::string& identifier = {},
                                                  std::size_t vocab_size = 0);

}  // namespace dpndd
