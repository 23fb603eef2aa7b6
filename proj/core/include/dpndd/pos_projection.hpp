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

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "dpndd/distribution.hpp"
#include "dpndd/treebank.hpp"

namespace dpndd {

// word -> POS classes it may take.
using PosLexicon = std::map<std::string, std::set<std::string>>;

inline constexpr const char* kOtherClass = "<OTHER>";

// TSV, one `word<TAB>POS` pair per line; repeated words accumulate classes.
PosLexicon read_lexicon_tsv(const std::filesystem::path& path);
PosLexicon read_lexicon_tsv(std::istream& in);
PosLexicon lexicon_from_treebank(const std::vector<LabeledTree>& trees);
void merge_lexicon(PosLexicon& into, const PosLexicon& from);

// Binary word-to-POS membership matrix of shape (p + 1) x c, stored by
// column. The last class is the reserved OTHER bucket that catches every
// vocabulary entry no lexicon class claims.
class PosProjection {
 public:
  PosProjection(std::vector<std::string> class_names, std::vector<std::vector<std::uint16_t>> columns);

  std::size_t num_classes() const { return class_names_.size(); }
  std::size_t vocab_size() const { return columns_.size(); }
  const std::vector<std::string>& class_names() const { return class_names_; }
  std::size_t other_class() const { return class_names_.size() - 1; }

  bool member(std::size_t cls, std::size_t vocab_index) const;
  std::span<const std::uint16_t> classes_of(std::size_t vocab_index) const { return columns_.at(vocab_index); }

  // q = M d, before renormalisation. Mass exceeds 1 when words sit in several classes.
  std::vector<double> project_raw(std::span<const float> d) const;
  std::vector<double> project_raw(std::span<const double> d) const;
  // q = M d rescaled to sum to 1.
  std::vector<double> project(std::span<const float> d) const;
  std::vector<double> project(const TokenDistribution& d) const { return project(d.probs()); }

  void save(std::ostream& out) const;
  void save(const std::filesystem::path& path) const;
  static PosProjection load(std::istream& in);
  static PosProjection load(const std::filesystem::path& path);

  friend bool operator==(const PosProjection&, const PosProjection&) = default;

 private:
  std::vector<std::string> class_names_;
  std::vector<std::vector<std::uint16_t>> columns_;
};

// Column j gets a 1 in every class listed for vocab[j] (after PTB-escape
// normalisation on both sides). Continuation pieces ("##..."), bracketed
// special tokens ("[CLS]") and unlisted entries go to OTHER. Classes are
// ordered alphabetically. Throws kEmptyLexicon.
PosProjection build_projection(const PosLexicon& lexicon, std::span<const std::string> vocab);

}  // namespace dpndd
