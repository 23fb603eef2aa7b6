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

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "dpndd/distribution.hpp"
#include "dpndd/distribution_provider.hpp"
#include "dpndd/pos_projection.hpp"

namespace dpndd {

// Both sides of a KL term are floored at this value and renormalised.
inline constexpr double kKlFloor = 1e-10;

// Replace original[start..end] (1-based, inclusive) with `replacement`.
struct Substitution {
  std::vector<TokenId> original;
  std::size_t start = 0;
  std::size_t end = 0;
  std::vector<TokenId> replacement;
  bool allow_deletion = false;

  // Throws kInvalidRange.
  void validate() const;
};

// (position in original, position in edited), both 1-based, for every
// token outside the replaced range.
struct OverlapAlignment {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
};

struct EditedSentence {
  std::vector<TokenId> tokens;
  OverlapAlignment alignment;
};

EditedSentence apply_substitution(const Substitution& sub);

// D_KL(edited || original) in nats, after flooring both vectors at `floor`
// and renormalising. Throws kDimensionMismatch.
double kl_divergence(std::span<const double> edited, std::span<const double> original,
                     double floor = kKlFloor);
double kl_divergence(std::span<const float> edited, std::span<const float> original,
                     double floor = kKlFloor);

// Per-position divergences over the overlapped part, in alignment order.
// With a projection these are POS-level terms, otherwise vocabulary-level.
std::vector<double> ndd_terms(const Substitution& sub, DistributionProvider& provider,
                              const PosProjection* projection = nullptr);

// Mean of ndd_terms(). Throws kEmptyOverlap when the replaced range is the
// whole sentence.
double ndd(const Substitution& sub, DistributionProvider& provider,
           const PosProjection* projection = nullptr);

}  // namespace dpndd
