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

#include "dpndd/conll.hpp"

#include <fstream>
#include <sstream>
#include <string>

#include "dpndd/error.hpp"

namespace dpndd {

namespace {

struct Builder {
  LabeledTree tree;
  bool with_pos = true;
  std::string open_label;
  std::size_t open_start = 0;

  void close(std::size_t end) {
    if (!open_label.empty()) tree.spans.push_back({open_start, end, open_label});
    open_label.clear();
  }

  void add(const std::vector<std::string>& cols, std::size_t line_no) {
    tree.words.push_back(cols.front());
    if (cols.size() >= 3) {
      tree.pos.push_back(cols[1]);
    } else {
      with_pos = false;
    }
    const std::size_t i = tree.words.size();
    const std::string& tag = cols.back();
    if (tag == "O") {
      close(i - 1);
      return;
    }
    if (tag.size() < 3 || (tag[0] != 'B' && tag[0] != 'I') || tag[1] != '-') {
      throw Error(ErrorCode::kMalformedBracket, "line " + std::to_string(line_no) + ": bad entity tag '" + tag + "'");
    }
    const std::string label = tag.substr(2);
    if (tag[0] == 'I' && open_label == label) return;
    close(i - 1);
    open_label = label;
    open_start = i;
  }

  LabeledTree finish() {
    close(tree.words.size());
    if (!with_pos) tree.pos.clear();
    LabeledTree out = std::move(tree);
    *this = Builder{};
    return out;
  }
};

}  // namespace

std::vector<LabeledTree> read_conll(std::istream& in) {
  std::vector<LabeledTree> out;
  Builder b;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ss(line);
    std::vector<std::string> cols;
    for (std::string c; ss >> c;) cols.push_back(c);
    if (cols.empty()) {
      if (!b.tree.words.empty()) out.push_back(b.finish());
      continue;
    }
    if (cols.front() == "-DOCSTART-") continue;
    if (cols.size() < 2) {
      throw Error(ErrorCode::kMalformedBracket, "line " + std::to_string(line_no) + ": expected a tag column");
    }
    b.add(cols, line_no);
  }
  if (!b.tree.words.empty()) out.push_back(b.finish());
  return out;
}

std::vector<LabeledTree> read_conll(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  return read_conll(in);
}

}  // namespace dpndd
