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

#include "dpndd/pos_projection.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_map>

#include "dpndd/error.hpp"
#include "dpndd/tokenizer.hpp"

namespace dpndd {

PosLexicon read_lexicon_tsv(std::istream& in) {
  PosLexicon lex;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0 || tab + 1 == line.size()) {
      throw Error(ErrorCode::kConfig, "lexicon line " + std::to_string(line_no) + " is not word<TAB>POS");
    }
    lex[line.substr(0, tab)].insert(line.substr(tab + 1));
  }
  return lex;
}

PosLexicon read_lexicon_tsv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open lexicon " + path.string());
  return read_lexicon_tsv(in);
}

PosLexicon lexicon_from_treebank(const std::vector<LabeledTree>& trees) {
  PosLexicon lex;
  for (const auto& t : trees) {
    for (std::size_t i = 0; i < t.words.size() && i < t.pos.size(); ++i) {
      lex[t.words[i]].insert(t.pos[i]);
    }
  }
  return lex;
}

void merge_lexicon(PosLexicon& into, const PosLexicon& from) {
  for (const auto& [word, tags] : from) into[word].insert(tags.begin(), tags.end());
}

PosProjection::PosProjection(std::vector<std::string> class_names,
                             std::vector<std::vector<std::uint16_t>> columns)
    : class_names_(std::move(class_names)), columns_(std::move(columns)) {
  if (class_names_.empty() || class_names_.back() != kOtherClass) {
    throw Error(ErrorCode::kConfig, "projection must end with the OTHER class");
  }
  for (auto& col : columns_) {
    if (col.empty()) throw Error(ErrorCode::kConfig, "vocabulary entry without a class");
    std::sort(col.begin(), col.end());
    col.erase(std::unique(col.begin(), col.end()), col.end());
    if (col.back() >= class_names_.size()) throw Error(ErrorCode::kConfig, "class index out of range");
  }
}

bool PosProjection::member(std::size_t cls, std::size_t vocab_index) const {
  const auto& col = columns_.at(vocab_index);
  return std::binary_search(col.begin(), col.end(), static_cast<std::uint16_t>(cls));
}

namespace {

template <typename T>
std::vector<double> project_columns(const std::vector<std::vector<std::uint16_t>>& columns,
                                    std::size_t num_classes, std::span<const T> d) {
  if (d.size() != columns.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "distribution has " + std::to_string(d.size()) +
                                                   " entries, projection expects " +
                                                   std::to_string(columns.size()));
  }
  std::vector<double> q(num_classes, 0.0);
  for (std::size_t j = 0; j < d.size(); ++j) {
    const double mass = static_cast<double>(d[j]);
    for (auto cls : columns[j]) q[cls] += mass;
  }
  return q;
}

}  // namespace

std::vector<double> PosProjection::project_raw(std::span<const float> d) const {
  return project_columns(columns_, class_names_.size(), d);
}

std::vector<double> PosProjection::project_raw(std::span<const double> d) const {
  return project_columns(columns_, class_names_.size(), d);
}

std::vector<double> PosProjection::project(std::span<const float> d) const {
  auto q = project_raw(d);
  double total = 0.0;
  for (double v : q) total += v;
  if (total <= 0.0) throw Error(ErrorCode::kInvalidDistribution, "projected mass is zero");
  for (double& v : q) v /= total;
  return q;
}

namespace {

constexpr char kProjectionMagic[8] = {'D', 'P', 'N', 'D', 'D', 'P', 'O', 'S'};
constexpr std::uint32_t kProjectionVersion = 1;

void write_u32(std::ostream& out, std::uint32_t v) {
  char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(b, 4);
}

std::uint32_t read_u32(std::istream& in) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  if (!in) throw Error(ErrorCode::kIo, "truncated projection file");
  return b[0] | (b[1] << 8) | (b[2] << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

}  // namespace

// Layout (little-endian): magic[8] | u32 version | u32 p | p x (u32 len, bytes)
//                         | u32 c | c x (u32 k, k x u32 class)
void PosProjection::save(std::ostream& out) const {
  out.write(kProjectionMagic, 8);
  write_u32(out, kProjectionVersion);
  write_u32(out, static_cast<std::uint32_t>(class_names_.size()));
  for (const auto& name : class_names_) {
    write_u32(out, static_cast<std::uint32_t>(name.size()));
    out.write(name.data(), static_cast<std::streamsize>(name.size()));
  }
  write_u32(out, static_cast<std::uint32_t>(columns_.size()));
  for (const auto& col : columns_) {
    write_u32(out, static_cast<std::uint32_t>(col.size()));
    for (auto cls : col) write_u32(out, cls);
  }
  if (!out) throw Error(ErrorCode::kIo, "failed writing projection");
}

void PosProjection::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  save(out);
}

PosProjection PosProjection::load(std::istream& in) {
  char magic[8];
  in.read(magic, 8);
  if (!in || !std::equal(magic, magic + 8, kProjectionMagic)) {
    throw Error(ErrorCode::kConfig, "not a projection file");
  }
  if (read_u32(in) != kProjectionVersion) throw Error(ErrorCode::kConfig, "unsupported projection version");
  std::vector<std::string> names(read_u32(in));
  for (auto& name : names) {
    name.resize(read_u32(in));
    in.read(name.data(), static_cast<std::streamsize>(name.size()));
  }
  std::vector<std::vector<std::uint16_t>> columns(read_u32(in));
  for (auto& col : columns) {
    col.resize(read_u32(in));
    for (auto& cls : col) cls = static_cast<std::uint16_t>(read_u32(in));
  }
  if (!in) throw Error(ErrorCode::kIo, "truncated projection file");
  return PosProjection(std::move(names), std::move(columns));
}

PosProjection PosProjection::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  return load(in);
}

PosProjection build_projection(const PosLexicon& lexicon, std::span<const std::string> vocab) {
  if (lexicon.empty()) throw Error(ErrorCode::kEmptyLexicon, "lexicon has no entries");

  std::set<std::string> tags;
  std::unordered_map<std::string, std::set<std::string>> normalized;
  for (const auto& [word, classes] : lexicon) {
    tags.insert(classes.begin(), classes.end());
    normalized[ptb_unescape(word)].insert(classes.begin(), classes.end());
  }
  std::vector<std::string> names(tags.begin(), tags.end());
  if (names.size() + 1 > UINT16_MAX) throw Error(ErrorCode::kConfig, "too many POS classes");
  std::unordered_map<std::string, std::uint16_t> class_index;
  for (std::size_t i = 0; i < names.size(); ++i) class_index[names[i]] = static_cast<std::uint16_t>(i);
  const auto other = static_cast<std::uint16_t>(names.size());
  names.emplace_back(kOtherClass);

  std::vector<std::vector<std::uint16_t>> columns(vocab.size());
  for (std::size_t j = 0; j < vocab.size(); ++j) {
    const std::string& entry = vocab[j];
    const bool fragment = entry.rfind("##", 0) == 0;
    const bool special = entry.size() > 2 && entry.front() == '[' && entry.back() == ']';
    if (!fragment && !special) {
      if (auto it = normalized.find(ptb_unescape(entry)); it != normalized.end()) {
        for (const auto& tag : it->second) columns[j].push_back(class_index.at(tag));
      }
    }
    if (columns[j].empty()) columns[j].push_back(other);
  }
  return PosProjection(std::move(names), std::move(columns));
}

}  // namespace dpndd
