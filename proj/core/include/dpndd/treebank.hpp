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
#include <iosfwd>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "dpndd/span.hpp"

namespace dpndd {

// A sentence with POS tags and labeled constituents. The same (s, t) may
// appear several times with different labels (unary chains).
struct LabeledTree {
  std::vector<std::string> words;
  std::vector<std::string> pos;  // empty or parallel to words
  std::vector<LabeledSpan> spans;

  std::size_t size() const { return words.size(); }
  // Throws kInvalidRange on out-of-range or crossing spans, or a POS list of the wrong length.
  void validate() const;

  friend bool operator==(const LabeledTree&, const LabeledTree&) = default;
};

// "NP-SBJ-1" -> "NP", "PP-LOC=2" -> "PP". Labels that start with '-' (-NONE-,
// -LRB-) are returned unchanged.
std::string bare_label(std::string_view label);

// One tree. Preterminals become POS tags, other labeled nodes become spans in
// pre-order (outer before inner for unary chains). -NONE- leaves and nodes
// left empty by their removal are dropped. Throws kMalformedBracket with the
// character offset of the problem.
LabeledTree parse_bracket(std::string_view text);
// Any number of trees, whitespace separated (one per line or multi-line).
std::vector<LabeledTree> parse_bracket_stream(std::string_view text);

// Single-line PTB bracketing. Words outside every span hang from an
// unlabeled root "( ... )"; a single span covering the sentence becomes the root.
std::string emit_bracket(const LabeledTree& tree);

// JSON span-list line: {"words": [...], "pos": [...], "spans": [[s, t, "label"], ...]}.
std::string to_json_line(const LabeledTree& tree);
LabeledTree from_json_line(std::string_view line);

enum class TreebankFormat { kAuto, kBracket, kJsonLines };

std::vector<LabeledTree> read_treebank(const std::filesystem::path& path,
                                       TreebankFormat format = TreebankFormat::kAuto);
std::vector<LabeledTree> read_treebank(std::istream& in, TreebankFormat format = TreebankFormat::kAuto);
void write_treebank(std::ostream& out, const std::vector<LabeledTree>& trees, TreebankFormat format);

// Tags treated as punctuation when stripping.
const std::set<std::string>& punctuation_tags();

// Removes punctuation tokens (by POS) and re-indexes spans; spans left
// without words disappear.
LabeledTree strip_punctuation(const LabeledTree& tree);

struct Wsj10Options {
  // Sentences are kept when their word count is strictly below this.
  std::size_t max_len = 10;
  std::set<std::string> labels = {"NP", "VP", "ADJP", "ADVP", "PP"};
  bool strip_punct = false;
};

std::vector<LabeledTree> build_wsj10(const std::vector<LabeledTree>& trees,
                                     const Wsj10Options& options = {});

std::size_t count_constituents(const std::vector<LabeledTree>& trees);

}  // namespace dpndd
