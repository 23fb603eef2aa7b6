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

#include "dpndd/treebank.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <sstream>

#include "dpndd/error.hpp"
#include "json.hpp"

namespace dpndd {

using json = nlohmann::json;

void LabeledTree::validate() const {
  if (!pos.empty() && pos.size() != words.size()) {
    throw Error(ErrorCode::kInvalidRange, "POS list length differs from word count");
  }
  for (const auto& s : spans) {
    if (s.start < 1 || s.start > s.end || s.end > words.size()) {
      throw Error(ErrorCode::kInvalidRange, "span (" + std::to_string(s.start) + "," +
                                                std::to_string(s.end) + ") outside sentence of " +
                                                std::to_string(words.size()) + " words");
    }
  }
  for (std::size_t i = 0; i < spans.size(); ++i) {
    for (std::size_t j = i + 1; j < spans.size(); ++j) {
      if (crosses(spans[i].span(), spans[j].span())) {
        throw Error(ErrorCode::kInvalidRange, "crossing spans in tree");
      }
    }
  }
}

std::string bare_label(std::string_view label) {
  if (label.empty() || label.front() == '-') return std::string(label);
  const auto cut = label.find_first_of("-=|");
  return std::string(label.substr(0, cut));
}

namespace {

struct Node {
  std::string label;
  std::string word;
  bool preterminal = false;
  std::vector<Node> children;
};

class BracketReader {
 public:
  explicit BracketReader(std::string_view text) : text_(text) {}

  bool at_end() {
    skip_space();
    return pos_ >= text_.size();
  }

  Node node() {
    skip_space();
    const std::size_t open = pos_;
    if (pos_ >= text_.size() || text_[pos_] != '(') fail("expected '('", pos_);
    ++pos_;
    Node n;
    skip_space();
    if (pos_ < text_.size() && text_[pos_] != '(' && text_[pos_] != ')') n.label = atom();

    std::size_t atoms = 0;
    std::size_t atom_offset = 0;
    while (true) {
      skip_space();
      if (pos_ >= text_.size()) fail("unbalanced parentheses: node never closed", open);
      const char c = text_[pos_];
      if (c == ')') {
        ++pos_;
        break;
      }
      if (c == '(') {
        n.children.push_back(node());
        continue;
      }
      atom_offset = pos_;
      n.word = atom();
      ++atoms;
    }
    if (atoms > 0) {
      if (atoms > 1 || !n.children.empty() || n.label.empty()) {
        fail("leaf word must be the only child of a labeled node", atom_offset);
      }
      n.preterminal = true;
    } else if (n.children.empty() && !n.label.empty()) {
      fail("node '" + n.label + "' has no children", open);
    }
    return n;
  }

  [[noreturn]] void fail(const std::string& what, std::size_t offset) const {
    throw Error(ErrorCode::kMalformedBracket, what + " at offset " + std::to_string(offset));
  }

 private:
  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  std::string atom() {
    const std::size_t begin = pos_;
    while (pos_ < text_.size() && text_[pos_] != '(' && text_[pos_] != ')' &&
           !std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
    return std::string(text_.substr(begin, pos_ - begin));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

// Appends words/spans under `n`; returns whether any word was produced.
bool collect(const Node& n, LabeledTree& tree) {
  if (n.preterminal) {
    if (n.label == "-NONE-") return false;
    tree.words.push_back(n.word);
    tree.pos.push_back(n.label);
    return true;
  }
  const std::size_t first_word = tree.words.size() + 1;
  const bool labeled = !n.label.empty();
  const std::size_t slot = tree.spans.size();
  if (labeled) tree.spans.push_back({first_word, 0, bare_label(n.label)});
  bool any = false;
  for (const auto& child : n.children) any = collect(child, tree) || any;
  if (!any) {
    if (labeled) tree.spans.pop_back();
    return false;
  }
  if (labeled) tree.spans[slot].end = tree.words.size();
  return true;
}

LabeledTree to_tree(const Node& root) {
  LabeledTree tree;
  collect(root, tree);
  return tree;
}

struct EmitNode {
  std::size_t span_index;
  std::vector<std::size_t> children;  // indices into the node array
};

}  // namespace

LabeledTree parse_bracket(std::string_view text) {
  BracketReader reader(text);
  if (reader.at_end()) reader.fail("empty input", 0);
  Node root = reader.node();
  if (!reader.at_end()) reader.fail("trailing input after tree", text.size());
  return to_tree(root);
}

std::vector<LabeledTree> parse_bracket_stream(std::string_view text) {
  BracketReader reader(text);
  std::vector<LabeledTree> out;
  while (!reader.at_end()) out.push_back(to_tree(reader.node()));
  return out;
}

std::string emit_bracket(const LabeledTree& tree) {
  const std::size_t n = tree.words.size();
  std::vector<std::size_t> order(tree.spans.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& x = tree.spans[a];
    const auto& y = tree.spans[b];
    if (x.start != y.start) return x.start < y.start;
    return x.end > y.end;
  });

  // Node 0 is the virtual root over the whole sentence.
  std::vector<EmitNode> nodes{{SIZE_MAX, {}}};
  std::vector<std::size_t> stack{0};
  auto covers = [&](std::size_t node, const LabeledSpan& s) {
    if (node == 0) return true;
    return contains(tree.spans[nodes[node].span_index].span(), s.span());
  };
  for (std::size_t idx : order) {
    const auto& s = tree.spans[idx];
    if (s.start < 1 || s.start > s.end || s.end > n) {
      throw Error(ErrorCode::kInvalidRange, "span outside sentence");
    }
    while (!covers(stack.back(), s)) stack.pop_back();
    const std::size_t parent = stack.back();
    if (!nodes[parent].children.empty()) {
      const auto& sibling = tree.spans[nodes[nodes[parent].children.back()].span_index];
      if (crosses(sibling.span(), s.span())) throw Error(ErrorCode::kInvalidRange, "crossing spans");
    }
    nodes.push_back({idx, {}});
    nodes[parent].children.push_back(nodes.size() - 1);
    stack.push_back(nodes.size() - 1);
  }

  std::string out;
  auto leaf = [&](std::size_t w) {
    out += '(';
    out += tree.pos.empty() ? std::string("XX") : tree.pos[w - 1];
    out += ' ';
    out += tree.words[w - 1];
    out += ')';
  };
  auto emit = [&](auto&& self, std::size_t node, std::size_t from, std::size_t to) -> void {
    out += '(';
    if (node != 0) out += tree.spans[nodes[node].span_index].label;
    std::size_t w = from;
    for (std::size_t child : nodes[node].children) {
      const auto& cs = tree.spans[nodes[child].span_index];
      for (; w < cs.start; ++w) {
        out += ' ';
        leaf(w);
      }
      out += ' ';
      self(self, child, cs.start, cs.end);
      w = cs.end + 1;
    }
    for (; w <= to; ++w) {
      out += ' ';
      leaf(w);
    }
    out += ')';
  };

  const auto& top = nodes[0].children;
  if (top.size() == 1 && n > 0) {
    const auto& s = tree.spans[nodes[top.front()].span_index];
    if (s.start == 1 && s.end == n) {
      emit(emit, top.front(), 1, n);
      return out;
    }
  }
  emit(emit, 0, 1, n);
  return out;
}

std::string to_json_line(const LabeledTree& tree) {
  json spans = json::array();
  for (const auto& s : tree.spans) spans.push_back(json::array({s.start, s.end, s.label}));
  json j{{"words", tree.words}, {"pos", tree.pos}, {"spans", spans}};
  return j.dump();
}

LabeledTree from_json_line(std::string_view line) {
  LabeledTree tree;
  try {
    const json j = json::parse(line);
    tree.words = j.at("words").get<std::vector<std::string>>();
    if (j.contains("pos")) tree.pos = j.at("pos").get<std::vector<std::string>>();
    if (j.contains("spans")) {
      for (const auto& s : j.at("spans")) {
        const std::string label = s.size() > 2 ? s.at(2).get<std::string>() : std::string("X");
        tree.spans.push_back({s.at(0).get<std::size_t>(), s.at(1).get<std::size_t>(), label});
      }
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kMalformedBracket, std::string("bad JSON span list: ") + e.what());
  }
  tree.validate();
  return tree;
}

std::vector<LabeledTree> read_treebank(std::istream& in, TreebankFormat format) {
  const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  if (format == TreebankFormat::kAuto) {
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return {};
    if (text[first] == '{') {
      format = TreebankFormat::kJsonLines;
    } else if (text[first] == '(') {
      format = TreebankFormat::kBracket;
    } else {
      throw Error(ErrorCode::kMalformedBracket,
                  "unrecognised treebank format at offset " + std::to_string(first));
    }
  }
  if (format == TreebankFormat::kBracket) return parse_bracket_stream(text);

  std::vector<LabeledTree> out;
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    out.push_back(from_json_line(line));
  }
  return out;
}

std::vector<LabeledTree> read_treebank(const std::filesystem::path& path, TreebankFormat format) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  return read_treebank(in, format);
}

void write_treebank(std::ostream& out, const std::vector<LabeledTree>& trees, TreebankFormat format) {
  for (const auto& t : trees) {
    out << (format == TreebankFormat::kJsonLines ? to_json_line(t) : emit_bracket(t)) << '\n';
  }
}

const std::set<std::string>& punctuation_tags() {
  static const std::set<std::string> kTags = {".", ",", ":", "``", "''", "-LRB-", "-RRB-"};
  return kTags;
}

LabeledTree strip_punctuation(const LabeledTree& tree) {
  if (tree.pos.size() != tree.words.size()) {
    throw Error(ErrorCode::kInvalidRange, "punctuation stripping needs POS tags");
  }
  const auto& punct = punctuation_tags();
  LabeledTree out;
  // new_index[i] = number of kept words among the first i words.
  std::vector<std::size_t> kept_before(tree.words.size() + 1, 0);
  for (std::size_t i = 0; i < tree.words.size(); ++i) {
    const bool keep = !punct.contains(tree.pos[i]);
    kept_before[i + 1] = kept_before[i] + (keep ? 1 : 0);
    if (keep) {
      out.words.push_back(tree.words[i]);
      out.pos.push_back(tree.pos[i]);
    }
  }
  for (const auto& s : tree.spans) {
    const std::size_t first = kept_before[s.start - 1] + 1;
    const std::size_t last = kept_before[s.end];
    if (last >= first) out.spans.push_back({first, last, s.label});
  }
  return out;
}

std::vector<LabeledTree> build_wsj10(const std::vector<LabeledTree>& trees,
                                     const Wsj10Options& options) {
  std::vector<LabeledTree> out;
  for (const auto& original : trees) {
    LabeledTree tree = options.strip_punct ? strip_punctuation(original) : original;
    if (tree.words.empty() || tree.words.size() >= options.max_len) continue;
    std::erase_if(tree.spans, [&](const LabeledSpan& s) { return !options.labels.contains(s.label); });
    out.push_back(std::move(tree));
  }
  return out;
}

std::size_t count_constituents(const std::vector<LabeledTree>& trees) {
  std::size_t n = 0;
  for (const auto& t : trees) n += t.spans.size();
  return n;
}

}  // namespace dpndd
