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

#include "dpndd/mold.hpp"

#include <algorithm>
#include <fstream>
#include <limits>

#include "dpndd/error.hpp"
#include "dpndd/ndd.hpp"
#include "json.hpp"

namespace dpndd {

using json = nlohmann::json;

std::vector<Mold> read_molds_json(std::istream& in) {
  std::vector<Mold> molds;
  try {
    const json j = json::parse(in);
    if (!j.is_array()) throw Error(ErrorCode::kConfig, "mold file must hold a JSON array");
    for (const auto& m : j) {
      Mold mold;
      mold.words = m.at("tokens").get<std::vector<std::string>>();
      mold.start = m.at("start").get<std::size_t>();
      mold.end = m.at("end").get<std::size_t>();
      mold.label = m.at("label").get<std::string>();
      mold.utl = m.value("utl", false);
      molds.push_back(std::move(mold));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kConfig, std::string("bad mold file: ") + e.what());
  }
  return molds;
}

std::vector<Mold> read_molds_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kConfig, "cannot open molds file " + path.string());
  return read_molds_json(in);
}

void write_molds_json(std::ostream& out, const std::vector<Mold>& molds) {
  json arr = json::array();
  for (const auto& m : molds) {
    arr.push_back({{"tokens", m.words}, {"start", m.start}, {"end", m.end}, {"label", m.label}, {"utl", m.utl}});
  }
  out << arr.dump(2) << '\n';
}

MoldRegistry::MoldRegistry(const std::vector<Mold>& molds, const SubwordTokenizer& tokenizer,
                           MoldRegistryOptions options) {
  if (molds.size() > options.max_molds) {
    throw Error(ErrorCode::kConfig, std::to_string(molds.size()) + " molds exceed the cap of " +
                                        std::to_string(options.max_molds));
  }
  for (const auto& m : molds) {
    const std::size_t n = m.words.size();
    if (m.start < 1 || m.start > m.end || m.end > n) {
      throw Error(ErrorCode::kConfig, "mold span (" + std::to_string(m.start) + "," +
                                          std::to_string(m.end) + ") out of range for label " + m.label);
    }
    if (m.start == 1 && m.end == n) {
      throw Error(ErrorCode::kConfig, "mold span for " + m.label + " covers the whole sentence");
    }
    if (!options.allowed_labels.empty() && !options.allowed_labels.contains(m.label)) {
      throw Error(ErrorCode::kConfig, "mold label '" + m.label + "' not in the label set");
    }
    PreparedMold p;
    p.mold = m;
    p.sentence = tokenize_sentence(m.words, tokenizer);
    std::tie(p.sub_start, p.sub_end) = p.sentence.subword_span(m.start, m.end);
    p.span_ids = p.sentence.subword_slice(m.start, m.end);
    if (!by_label_.contains(m.label)) labels_.push_back(m.label);
    by_label_[m.label].push_back(molds_.size());
    molds_.push_back(std::move(p));
  }
}

std::vector<const PreparedMold*> MoldRegistry::select(const std::string& label,
                                                      MoldSelection selection) const {
  auto it = by_label_.find(label);
  if (it == by_label_.end()) throw Error(ErrorCode::kNoMoldForLabel, "no mold for label " + label);
  std::vector<const PreparedMold*> out;
  for (auto idx : it->second) {
    if (selection == MoldSelection::kAll || molds_[idx].mold.utl) out.push_back(&molds_[idx]);
  }
  if (out.empty()) {
    for (auto idx : it->second) out.push_back(&molds_[idx]);
  }
  return out;
}

double to_mold_score(const PreparedMold& mold, const TokenizedSentence& sentence, std::size_t s,
                     std::size_t t, DistributionProvider& provider, const PosProjection* projection) {
  Substitution sub{mold.sentence.ids, mold.sub_start, mold.sub_end, sentence.subword_slice(s, t)};
  return ndd(sub, provider, projection);
}

double from_mold_score(const PreparedMold& mold, const TokenizedSentence& sentence, std::size_t s,
                       std::size_t t, DistributionProvider& provider, const PosProjection* projection) {
  const auto [a, b] = sentence.subword_span(s, t);
  Substitution sub{sentence.ids, a, b, mold.span_ids};
  return ndd(sub, provider, projection);
}

double dp_ndd(const std::string& label, const TokenizedSentence& sentence, std::size_t s,
              std::size_t t, const MoldRegistry& registry, DistributionProvider& provider,
              const PosProjection* projection, MoldSelection selection) {
  double best = std::numeric_limits<double>::infinity();
  for (const PreparedMold* m : registry.select(label, selection)) {
    const double score = to_mold_score(*m, sentence, s, t, provider, projection) +
                         from_mold_score(*m, sentence, s, t, provider, projection);
    best = std::min(best, score);
  }
  return best;
}

double DpNddScorer::score(const std::string& label, const TokenizedSentence& sentence, std::size_t s,
                          std::size_t t) {
  if (options_.whole_sentence_to_mold_only && s == 1 && t == sentence.words.size()) {
    double best = std::numeric_limits<double>::infinity();
    for (const PreparedMold* m : registry_.select(label, options_.selection)) {
      best = std::min(best, to_mold_score(*m, sentence, s, t, provider_, projection_));
    }
    return best;
  }
  return dp_ndd(label, sentence, s, t, registry_, provider_, projection_, options_.selection);
}

}  // namespace dpndd
