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

#include "dpndd/error.hpp"

namespace dpndd {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidQuery: return "InvalidQuery";
    case ErrorCode::kInvalidDistribution: return "InvalidDistribution";
    case ErrorCode::kBackendUnavailable: return "BackendUnavailable";
    case ErrorCode::kVocabMismatch: return "VocabMismatch";
    case ErrorCode::kCorruptCache: return "CorruptCache";
    case ErrorCode::kEmptyLexicon: return "EmptyLexicon";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kInvalidRange: return "InvalidRange";
    case ErrorCode::kEmptyOverlap: return "EmptyOverlap";
    case ErrorCode::kNoMoldForLabel: return "NoMoldForLabel";
    case ErrorCode::kMalformedBracket: return "MalformedBracket";
    case ErrorCode::kEmptyTreebank: return "EmptyTreebank";
    case ErrorCode::kSentenceCountMismatch: return "SentenceCountMismatch";
    case ErrorCode::kTokenMismatch: return "TokenMismatch";
    case ErrorCode::kSpanSetMismatch: return "SpanSetMismatch";
    case ErrorCode::kInsufficientSpans: return "InsufficientSpans";
    case ErrorCode::kConfig: return "ConfigError";
    case ErrorCode::kIo: return "IoError";
  }
  return "Unknown";
}

}  // namespace dpndd
