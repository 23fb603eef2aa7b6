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
#include <vector>

#include "dpndd/treebank.hpp"

namespace dpndd {

// Whitespace-separated column files (CoNLL-03 style: word POS chunk NER).
// Blank lines end sentences and -DOCSTART- lines are skipped. The last column
// holds entity tags in BIO or IOB1; "B-X" always opens an entity and "I-X"
// opens one unless the previous token is already inside an X entity. The
// second column, when there are at least three, becomes the POS tags.
std::vector<LabeledTree> read_conll(std::istream& in);
std::vector<LabeledTree> read_conll(const std::filesystem::path& path);

}  // namespace dpndd
