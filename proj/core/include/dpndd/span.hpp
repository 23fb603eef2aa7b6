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

#include <compare>
#include <cstddef>
#include <string>

namespace dpndd {

// Word span, 1-based and inclusive on both ends.
struct Span {
  std::size_t start = 0;
  std::size_t end = 0;

  std::size_t length() const { return end - start + 1; }
  friend auto operator<=>(const Span&, const Span&) = default;
};

// Partial overlap: s < s' <= t < t' or the mirror image.
inline bool crosses(const Span& a, const Span& b) {
  return (a.start < b.start && b.start <= a.end && a.end < b.end) ||
         (b.start < a.start && a.start <= b.end && b.end < a.end);
}

// a contains b (non-strict on both ends).
inline bool contains(const Span& a, const Span& b) {
  return a.start <= b.start && b.end <= a.end;
}

inline bool nested(const Span& a, const Span& b) { return contains(a, b) || contains(b, a); }

struct LabeledSpan {
  std::size_t start = 0;
  std::size_t end = 0;
  std::string label;

  Span span() const { return {start, end}; }
  friend auto operator<=>(const LabeledSpan&, const LabeledSpan&) = default;
};

}  // namespace dpndd
