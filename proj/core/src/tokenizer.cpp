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

#include "dpndd/tokenizer.hpp"

#include <fstream>

#include "dpndd/error.hpp"

namespace dpndd {

Vocabulary::Vocabulary(std::vector<std::string> entries) : entries_(std::move(entries)) {
  index_.reserve(entries_.size());
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    index_.emplace(entries_[i], static_cast<TokenId>(i));
  }
}

Vocabulary Vocabulary::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open vocabulary " + path.string());
  std::vector<std::string> entries;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    entries.push_back(line);
  }
  if (entries.empty()) throw Error(ErrorCode::kConfig, "empty vocabulary " + path.string());
  return Vocabulary(std::move(entries));
}

std::optional<TokenId> Vocabulary::find(std::string_view entry) const {
  auto it = index_.find(std::string(entry));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::string ptb_unescape(std::string_view word) {
  static const std::pair<std::string_view, std::string_view> kEscapes[] = {
      {"-LRB-", "("}, {"-RRB-", ")"}, {"-LCB-", "{"}, {"-RCB-", "}"},
      {"-LSB-", "["}, {"-RSB-", "]"}, {"``", "\""},   {"''", "\""},
  };
  for (const auto& [from, to] : kEscapes) {
    if (word == from) return std::string(to);
  }
  return std::string(word);
}

namespace {

bool is_ascii_punct(unsigned char c) {
  return (c >= 33 && c <= 47) || (c >= 58 && c <= 64) || (c >= 91 && c <= 96) ||
         (c >= 123 && c <= 126);
}

bool is_space(unsigned char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

bool is_codepoint_start(unsigned char c) { return (c & 0xC0) != 0x80; }

TokenId require(const Vocabulary& vocab, const std::string& token) {
  auto id = vocab.find(token);
  if (!id) throw Error(ErrorCode::kConfig, "vocabulary lacks '" + token + "'");
  return *id;
}

}  // namespace

WordPieceTokenizer::WordPieceTokenizer(std::shared_ptr<const Vocabulary> vocab,
                                       std::string unk_token, std::string continuation_prefix,
                                       std::size_t max_chars_per_word)
    : vocab_(std::move(vocab)),
      unk_(require(*vocab_, unk_token)),
      prefix_(std::move(continuation_prefix)),
      max_chars_(max_chars_per_word) {}

void WordPieceTokenizer::wordpiece(std::string_view piece, std::vector<TokenId>& out) const {
  if (piece.size() > max_chars_) {
    out.push_back(unk_);
    return;
  }
  std::vector<TokenId> pieces;
  std::size_t start = 0;
  while (start < piece.size()) {
    std::size_t end = piece.size();
    std::optional<TokenId> found;
    while (end > start) {
      if (end == piece.size() || is_codepoint_start(static_cast<unsigned char>(piece[end]))) {
        std::string candidate(piece.substr(start, end - start));
        if (start > 0) candidate.insert(0, prefix_);
        if ((found = vocab_->find(candidate))) break;
      }
      --end;
    }
    if (!found) {
      out.push_back(unk_);
      return;
    }
    pieces.push_back(*found);
    start = end;
  }
  out.insert(out.end(), pieces.begin(), pieces.end());
}

std::vector<TokenId> WordPieceTokenizer::encode_word(std::string_view word) const {
  const std::string text = ptb_unescape(word);
  std::vector<TokenId> out;
  std::size_t i = 0;
  while (i < text.size()) {
    const auto c = static_cast<unsigned char>(text[i]);
    if (is_space(c)) {
      ++i;
      continue;
    }
    if (is_ascii_punct(c)) {
      wordpiece(std::string_view(text).substr(i, 1), out);
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && !is_space(static_cast<unsigned char>(text[j])) &&
           !is_ascii_punct(static_cast<unsigned char>(text[j]))) {
      ++j;
    }
    wordpiece(std::string_view(text).substr(i, j - i), out);
    i = j;
  }
  if (out.empty()) out.push_back(unk_);
  return out;
}

WordLevelTokenizer::WordLevelTokenizer(std::shared_ptr<const Vocabulary> vocab,
                                       std::string unk_token)
    : vocab_(std::move(vocab)), unk_(require(*vocab_, unk_token)) {}

std::vector<TokenId> WordLevelTokenizer::encode_word(std::string_view word) const {
  auto id = vocab_->find(word);
  return {id.value_or(unk_)};
}

std::pair<std::size_t, std::size_t> TokenizedSentence::subword_span(std::size_t s,
                                                                    std::size_t t) const {
  if (s < 1 || s > t || t > word_ranges.size()) {
    throw Error(ErrorCode::kInvalidRange, "word span (" + std::to_string(s) + "," +
                                              std::to_string(t) + ") outside sentence of " +
                                              std::to_string(word_ranges.size()) + " words");
  }
  return {word_ranges[s - 1].first + 1, word_ranges[t - 1].second};
}

std::vector<TokenId> TokenizedSentence::subword_slice(std::size_t s, std::size_t t) const {
  const auto [a, b] = subword_span(s, t);
  return {ids.begin() + static_cast<std::ptrdiff_t>(a - 1), ids.begin() + static_cast<std::ptrdiff_t>(b)};
}

TokenizedSentence tokenize_sentence(std::span<const std::string> words,
                                    const SubwordTokenizer& tokenizer) {
  TokenizedSentence out;
  out.words.assign(words.begin(), words.end());
  out.word_ranges.reserve(words.size());
  for (const auto& w : words) {
    const std::size_t begin = out.ids.size();
    auto ids = tokenizer.encode_word(w);
    out.ids.insert(out.ids.end(), ids.begin(), ids.end());
    out.word_ranges.emplace_back(begin, out.ids.size());
  }
  return out;
}

}  // namespace dpndd
