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

#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "dpndd/distribution.hpp"

namespace dpndd {

// Model vocabulary in index order (BERT's vocab.txt: one entry per line).
class Vocabulary {
 public:
  explicit Vocabulary(std::vector<std::string> entries);
  static Vocabulary load(const std::filesystem::path& path);

  std::size_t size() const { return entries_.size(); }
  const std::string& at(TokenId id) const { return entries_.at(static_cast<std::size_t>(id)); }
  std::optional<TokenId> find(std::string_view entry) const;
  std::span<const std::string> entries() const { return entries_; }

 private:
  std::vector<std::string> entries_;
  std::unordered_map<std::string, TokenId> index_;
};

// Maps PTB escapes back to the characters a language model was trained on
// (-LRB- -> "(", `` -> ", ...). Other words pass through unchanged.
std::string ptb_unescape(std::string_view word);

class SubwordTokenizer {
 public:
  virtual ~SubwordTokenizer() = default;
  // Never returns an empty list; unknown material maps to the UNK id.
  virtual std::vector<TokenId> encode_word(std::string_view word) const = 0;
};

// Cased BERT-style tokenisation of a single pre-tokenised word: punctuation
// splitting followed by greedy longest-match WordPiece.
class WordPieceTokenizer final : public SubwordTokenizer {
 public:
  explicit WordPieceTokenizer(std::shared_ptr<const Vocabulary> vocab,
                              std::string unk_token = "[UNK]",
                              std::string continuation_prefix = "##",
                              std::size_t max_chars_per_word = 100);

  std::vector<TokenId> encode_word(std::string_view word) const override;

 private:
  void wordpiece(std::string_view piece, std::vector<TokenId>& out) const;

  std::shared_ptr<const Vocabulary> vocab_;
  TokenId unk_;
  std::string prefix_;
  std::size_t max_chars_;
};

// One id per word; words missing from the vocabulary become UNK. Used with
// word-level vocabularies (tests, the mock backend).
class WordLevelTokenizer final : public SubwordTokenizer {
 public:
  explicit WordLevelTokenizer(std::shared_ptr<const Vocabulary> vocab,
                              std::string unk_token = "[UNK]");

  std::vector<TokenId> encode_word(std::string_view word) const override;

 private:
  std::shared_ptr<const Vocabulary> vocab_;
  TokenId unk_;
};

// Words plus their subword ids and the word -> subword alignment.
struct TokenizedSentence {
  std::vector<std::string> words;
  std::vector<TokenId> ids;
  // Half-open, 0-based [begin, end) ranges into `ids`, one per word.
  std::vector<std::pair<std::size_t, std::size_t>> word_ranges;

  // 1-based inclusive word span -> 1-based inclusive subword span.
  std::pair<std::size_t, std::size_t> subword_span(std::size_t s, std::size_t t) const;
  std::vector<TokenId> subword_slice(std::size_t s, std::size_t t) const;
};

TokenizedSentence tokenize_sentence(std::span<const std::string> words,
                                    const SubwordTokenizer& tokenizer);

}  // namespace dpndd
