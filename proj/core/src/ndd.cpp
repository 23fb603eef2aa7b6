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

#include "dpndd/ndd.hpp"

#include <cmath>
#include <numeric>

#include "dpndd/error.hpp"

namespace dpndd {

void Substitution::validate() const {
  const std::size_t n = original.size();
  if (start < 1 || start > end || end > n) {
    throw Error(ErrorCode::kInvalidRange, "substitution range (" + std::to_string(start) + "," +
                                              std::to_string(end) + ") invalid for length " +
                                              std::to_string(n));
  }
  if (replacement.empty() && !allow_deletion) {
    throw Error(ErrorCode::kInvalidRange, "empty replacement (deletion is disabled)");
  }
}

EditedSentence apply_substitution(const Substitution& sub) {
  sub.validate();
  const std::size_t n = sub.original.size();
  const std::size_t removed = sub.end - sub.start + 1;
  const std::size_t m = sub.replacement.size();

  EditedSentence out;
  out.tokens.reserve(n - removed + m);
  out.tokens.insert(out.tokens.end(), sub.original.begin(),
                    sub.original.begin() + static_cast<std::ptrdiff_t>(sub.start - 1));
  out.tokens.insert(out.tokens.end(), sub.replacement.begin(), sub.replacement.end());
  out.tokens.insert(out.tokens.end(), sub.original.begin() + static_cast<std::ptrdiff_t>(sub.end),
                    sub.original.end());

  out.alignment.pairs.reserve(n - removed);
  for (std::size_t k = 1; k < sub.start; ++k) out.alignment.pairs.emplace_back(k, k);
  for (std::size_t k = sub.end + 1; k <= n; ++k) out.alignment.pairs.emplace_back(k, k - removed + m);
  return out;
}

namespace {

template <typename T>
double floored_kl(std::span<const T> p, std::span<const T> q, double floor) {
  if (p.size() != q.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "KL operands have lengths " + std::to_string(p.size()) +
                                                   " and " + std::to_string(q.size()));
  }
  double zp = 0.0;
  double zq = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    zp += std::max(static_cast<double>(p[i]), floor);
    zq += std::max(static_cast<double>(q[i]), floor);
  }
  double kl = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double a = std::max(static_cast<double>(p[i]), floor) / zp;
    const double b = std::max(static_cast<double>(q[i]), floor) / zq;
    kl += a * std::log(a / b);
  }
  return kl;
}

}  // namespace

double kl_divergence(std::span<const double> edited, std::span<const double> original, double floor) {
  return floored_kl(edited, original, floor);
}

double kl_divergence(std::span<const float> edited, std::span<const float> original, double floor) {
  return floored_kl(edited, original, floor);
}

std::vector<double> ndd_terms(const Substitution& sub, DistributionProvider& provider,
                              const PosProjection* projection) {
  const EditedSentence edited = apply_substitution(sub);
  const auto& pairs = edited.alignment.pairs;
  if (pairs.empty()) {
    throw Error(ErrorCode::kEmptyOverlap, "substitution covers the whole sentence");
  }
  if (projection && projection->vocab_size() != provider.vocab_size()) {
    throw Error(ErrorCode::kDimensionMismatch, "projection and provider vocabularies differ");
  }

  // Originals first, then edited, in alignment order.
  std::vector<MaskQuery> queries;
  queries.reserve(2 * pairs.size());
  for (const auto& [k, k_edited] : pairs) queries.push_back({sub.original, k - 1});
  for (const auto& [k, k_edited] : pairs) queries.push_back({edited.tokens, k_edited - 1});
  const auto dists = provider.get_distributions_batch(queries);

  std::vector<double> terms(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto& before = dists[i];
    const auto& after = dists[pairs.size() + i];
    if (projection) {
      const auto q = projection->project(before);
      const auto q_edited = projection->project(after);
      terms[i] = kl_divergence(std::span<const double>(q_edited), std::span<const double>(q));
    } else {
      terms[i] = kl_divergence(after.probs(), before.probs());
    }
  }
  return terms;
}

double ndd(const Substitution& sub, DistributionProvider& provider, const PosProjection* projection) {
  const auto terms = ndd_terms(sub, provider, projection);
  return std::accumulate(terms.begin(), terms.end(), 0.0) / static_cast<double>(terms.size());
}

}  // namespace dpndd
