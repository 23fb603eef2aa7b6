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

#include <algorithm>
#include <cmath>
#include <string_view>

#include "dpndd/error.hpp"
#include "httplib.h"
#include "json.hpp"

namespace dpndd {

using json = nlohmann::json;

void MaskQuery::validate() const {
  if (tokens.empty()) {
    throw Error(ErrorCode::kInvalidQuery, "empty token sequence");
  }
  if (masked_index >= tokens.size()) {
    throw Error(ErrorCode::kInvalidQuery,
                "masked_index " + std::to_string(masked_index) + " out of range for " +
                    std::to_string(tokens.size()) + " tokens");
  }
}

TokenDistribution::TokenDistribution(std::vector<float> probs) : probs_(std::move(probs)) {
  if (probs_.empty()) {
    throw Error(ErrorCode::kInvalidDistribution, "empty probability vector");
  }
  double sum = 0.0;
  for (float p : probs_) {
    if (!std::isfinite(p) || p < 0.0f) {
      throw Error(ErrorCode::kInvalidDistribution, "negative or non-finite probability");
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > kDistributionSumTolerance) {
    throw Error(ErrorCode::kInvalidDistribution,
                "probabilities sum to " + std::to_string(sum));
  }
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Uniform in [-1, 1).
double signed_unit(std::uint64_t h) {
  return static_cast<double>(h >> 11) * 0x1.0p-52 - 1.0;
}

constexpr std::uint64_t kBeforeStart = 0xfffffffffffff001ULL;
constexpr std::uint64_t kAfterEnd = 0xfffffffffffff002ULL;

}  // namespace

MockBackend::MockBackend(MockBackendOptions options) : options_(std::move(options)) {
  if (options_.vocab_size == 0) {
    throw Error(ErrorCode::kConfig, "mock backend needs a positive vocabulary size");
  }
}

std::vector<float> MockBackend::predict(const MaskQuery& query) const {
  query.validate();
  const std::size_t c = options_.vocab_size;
  if (options_.uniform) {
    return std::vector<float>(c, 1.0f / static_cast<float>(c));
  }

  std::vector<double> logits(c, 0.0);
  const auto n = static_cast<long>(query.tokens.size());
  const auto w = static_cast<long>(options_.window);
  const auto centre = static_cast<long>(query.masked_index);
  for (long offset = -w; offset <= w; ++offset) {
    if (offset == 0) continue;
    const long pos = centre + offset;
    std::uint64_t token = pos < 0    ? kBeforeStart
                          : pos >= n ? kAfterEnd
                                     : static_cast<std::uint32_t>(query.tokens[pos]);
    const std::uint64_t base =
        splitmix64(options_.seed ^ splitmix64(static_cast<std::uint64_t>(offset + 1024)) ^
                   splitmix64(token * 0x2545f4914f6cdd1dULL));
    const double weight = options_.logit_scale / static_cast<double>(std::abs(offset));
    for (std::size_t j = 0; j < c; ++j) {
      logits[j] += weight * signed_unit(splitmix64(base + j));
    }
  }

  const double top = *std::max_element(logits.begin(), logits.end());
  double z = 0.0;
  for (double& l : logits) {
    l = std::exp(l - top);
    z += l;
  }
  std::vector<float> probs(c);
  for (std::size_t j = 0; j < c; ++j) probs[j] = static_cast<float>(logits[j] / z);
  return probs;
}

std::vector<std::vector<float>> MockBackend::compute(std::span<const MaskQuery> queries) {
  calls_.fetch_add(1);
  std::vector<std::vector<float>> out;
  out.reserve(queries.size());
  for (const auto& q : queries) out.push_back(predict(q));
  return out;
}

std::vector<std::vector<float>> CallbackBackend::compute(std::span<const MaskQuery> queries) {
  std::vector<std::vector<float>> out;
  out.reserve(queries.size());
  for (const auto& q : queries) out.push_back(fn_(q));
  return out;
}

namespace {

json query_to_json(const MaskQuery& q) {
  return json{{"tokens", q.tokens}, {"masked_index", q.masked_index}};
}

std::vector<float> probs_from_json(const json& j) {
  const json& arr = j.is_object() ? j.at("probs") : j;
  return arr.get<std::vector<float>>();
}

httplib::Client make_client(const HttpBackendOptions& o) {
  httplib::Client client(o.endpoint);
  client.set_connection_timeout(o.timeout_seconds, 0);
  client.set_read_timeout(o.timeout_seconds, 0);
  client.set_write_timeout(o.timeout_seconds, 0);
  return client;
}

[[noreturn]] void raise_http_failure(const std::string& endpoint, const httplib::Result& res) {
  if (!res) {
    throw Error(ErrorCode::kBackendUnavailable,
                "cannot reach " + endpoint + ": " + httplib::to_string(res.error()));
  }
  if (res->status == 400) {
    throw Error(ErrorCode::kInvalidQuery, "server rejected request: " + res->body);
  }
  throw Error(ErrorCode::kBackendUnavailable,
              "server at " + endpoint + " answered HTTP " + std::to_string(res->status));
}

}  // namespace

HttpBackend::HttpBackend(HttpBackendOptions options) : options_(std::move(options)) {
  if (options_.max_batch == 0) options_.max_batch = 1;
  if (!options_.identifier.empty() && options_.vocab_size != 0) return;

  auto client = make_client(options_);
  auto res = client.Get("/health");
  if (!res || res->status != 200) raise_http_failure(options_.endpoint, res);
  try {
    const json health = json::parse(res->body);
    const auto served_vocab = health.at("vocab_size").get<std::size_t>();
    if (options_.vocab_size != 0 && options_.vocab_size != served_vocab) {
      throw Error(ErrorCode::kVocabMismatch,
                  "configured vocabulary size " + std::to_string(options_.vocab_size) +
                      " but server reports " + std::to_string(served_vocab));
    }
    options_.vocab_size = served_vocab;
    if (options_.identifier.empty()) options_.identifier = health.at("backend").get<std::string>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kBackendUnavailable, std::string("malformed /health reply: ") + e.what());
  }
}

std::vector<std::vector<float>> HttpBackend::compute(std::span<const MaskQuery> queries) {
  if (queries.empty()) return {};
  auto client = make_client(options_);
  std::vector<std::vector<float>> out;
  out.reserve(queries.size());
  try {
    if (queries.size() == 1) {
      auto res = client.Post("/distribution", query_to_json(queries.front()).dump(),
                             "application/json");
      if (!res || res->status != 200) raise_http_failure(options_.endpoint, res);
      out.push_back(probs_from_json(json::parse(res->body)));
      return out;
    }
    json body{{"queries", json::array()}};
    for (const auto& q : queries) body["queries"].push_back(query_to_json(q));
    auto res = client.Post("/distributions", body.dump(), "application/json");
    if (!res || res->status != 200) raise_http_failure(options_.endpoint, res);
    const json reply = json::parse(res->body);
    const json& results = reply.at("results");
    if (results.size() != queries.size()) {
      throw Error(ErrorCode::kBackendUnavailable,
                  "server returned " + std::to_string(results.size()) + " results for " +
                      std::to_string(queries.size()) + " queries");
    }
    for (const auto& r : results) out.push_back(probs_from_json(r));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kBackendUnavailable, std::string("malformed server reply: ") + e.what());
  }
  return out;
}

std::shared_ptr<DistributionBackend> make_backend(const std::string& endpoint,
                                                  const std::string& identifier,
                                                  std::size_t vocab_size) {
  constexpr std::string_view kMock = "mock:";
  if (endpoint == "mock") {
    if (vocab_size == 0) throw Error(ErrorCode::kConfig, "endpoint 'mock' needs a vocabulary size");
    MockBackendOptions o;
    o.vocab_size = vocab_size;
    o.identifier = identifier.empty() ? "mock-0" : identifier;
    return std::make_shared<MockBackend>(o);
  }
  if (endpoint.rfind(kMock, 0) == 0) {
    MockBackendOptions o;
    std::string rest = endpoint.substr(kMock.size());
    const auto colon = rest.find(':');
    try {
      o.vocab_size = std::stoul(rest.substr(0, colon));
      if (colon != std::string::npos) o.seed = std::stoull(rest.substr(colon + 1));
    } catch (const std::exception&) {
      throw Error(ErrorCode::kConfig, "bad mock endpoint '" + endpoint + "'");
    }
    if (vocab_size != 0 && vocab_size != o.vocab_size) {
      throw Error(ErrorCode::kVocabMismatch, "mock endpoint vocabulary differs from configured size");
    }
    o.identifier = identifier.empty() ? "mock-" + std::to_string(o.seed) : identifier;
    return std::make_shared<MockBackend>(o);
  }
  if (endpoint.rfind("http://", 0) == 0) {
    HttpBackendOptions o;
    o.endpoint = endpoint;
    o.identifier = identifier;
    o.vocab_size = vocab_size;
    return std::make_shared<HttpBackend>(o);
  }
  throw Error(ErrorCode::kConfig, "unsupported endpoint '" + endpoint + "'");
}

}  // namespace dpndd
