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

#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "dpndd/error.hpp"
#include "dpndd/ndd.hpp"
#include "fixtures.hpp"
#include "oracle.hpp"

namespace dpndd {
namespace {

std::vector<std::string> split(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

class MoldTest : public ::testing::Test {
 protected:
  std::shared_ptr<const Vocabulary> vocab = testing::word_vocab(
      split("the cat sat on mat a dog ran to park big red house is very old we saw it"));
  WordLevelTokenizer tok{vocab};
  std::shared_ptr<MockBackend> backend = std::make_shared<MockBackend>(MockBackendOptions{vocab->size(), 5});
  DistributionProvider provider{backend};
  PosProjection projection = build_projection(
      {{"the", {"DT"}}, {"a", {"DT"}}, {"cat", {"NN"}}, {"dog", {"NN"}}, {"mat", {"NN"}}, {"sat", {"VBD"}},
       {"ran", {"VBD"}}, {"on", {"IN"}}, {"to", {"IN", "TO"}}, {"big", {"JJ"}}, {"red", {"JJ"}}},
      vocab->entries());

  std::vector<Mold> molds = {
      {split("the cat sat on the mat"), 1, 2, "NP", true},
      {split("we saw a big red house"), 3, 6, "NP", false},
      {split("the dog ran to the park"), 4, 6, "PP", false},
  };

  TokenizedSentence sentence(const std::string& s) { return tokenize_sentence(split(s), tok); }
};

TEST_F(MoldTest, RegistryValidation) {
  EXPECT_NO_THROW(MoldRegistry(molds, tok));
  auto bad = molds;
  bad[0].end = 7;
  EXPECT_THROW(MoldRegistry(bad, tok), Error);
  bad = molds;
  bad[0].start = 0;
  EXPECT_THROW(MoldRegistry(bad, tok), Error);
  bad = molds;
  bad[0].start = 1;
  bad[0].end = 6;
  EXPECT_THROW(MoldRegistry(bad, tok), Error);
  EXPECT_THROW(MoldRegistry(molds, tok, {2, {}}), Error);
  EXPECT_THROW(MoldRegistry(molds, tok, {25, {"NP"}}), Error);
}

TEST_F(MoldTest, SelectionAndFallback) {
  MoldRegistry reg(molds, tok);
  EXPECT_EQ(reg.labels(), (std::vector<std::string>{"NP", "PP"}));
  EXPECT_EQ(reg.select("NP").size(), 2u);
  EXPECT_EQ(reg.select("NP", MoldSelection::kUtlFlagged).size(), 1u);
  EXPECT_EQ(reg.select("PP", MoldSelection::kUtlFlagged).size(), 1u);
  try {
    reg.select("VP");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNoMoldForLabel);
  }
}

TEST_F(MoldTest, IdenticalSpanScoresZero) {
  MoldRegistry reg(molds, tok);
  const auto& m = *reg.select("NP").front();
  const auto v = sentence("a cat sat on the mat");  // "a cat" vs mold "the cat"
  const auto same = sentence("we think the cat is old");
  EXPECT_EQ(to_mold_score(m, same, 3, 4, provider, &projection), 0.0);
  EXPECT_EQ(from_mold_score(m, m.sentence, 1, 2, provider, &projection), 0.0);
  EXPECT_EQ(dp_ndd("NP", m.sentence, 1, 2, reg, provider, &projection), 0.0);
  EXPECT_GT(to_mold_score(m, v, 1, 2, provider, nullptr), 0.0);
}

TEST_F(MoldTest, ComponentsMatchBruteForce) {
  MoldRegistry reg(molds, tok);
  const auto v = sentence("a big dog sat on the red mat");
  testing::PredictFn predict = [&](const std::vector<TokenId>& t, std::size_t k) { return backend->predict({t, k}); };
  for (const auto* m : reg.select("NP")) {
    const auto to = to_mold_score(*m, v, 1, 3, provider, nullptr);
    const auto from = from_mold_score(*m, v, 1, 3, provider, nullptr);
    const auto expect_to =
        testing::brute_force_ndd(m->sentence.ids, m->mold.start, m->mold.end, v.subword_slice(1, 3), predict);
    const auto expect_from = testing::brute_force_ndd(v.ids, 1, 3, m->span_ids, predict);
    EXPECT_NEAR(to, static_cast<double>(expect_to), 1e-12);
    EXPECT_NEAR(from, static_cast<double>(expect_from), 1e-12);
  }
}

TEST_F(MoldTest, DpNddIsMinOfSums) {
  MoldRegistry reg(molds, tok);
  const auto v = sentence("a big dog sat on the red mat");
  double best = 1e300;
  for (const auto* m : reg.select("NP")) {
    best = std::min(best, to_mold_score(*m, v, 6, 8, provider, &projection) +
                              from_mold_score(*m, v, 6, 8, provider, &projection));
  }
  EXPECT_EQ(dp_ndd("NP", v, 6, 8, reg, provider, &projection), best);

  MoldRegistry single({molds[0]}, tok);
  const auto& m = *single.select("NP").front();
  EXPECT_EQ(dp_ndd("NP", v, 6, 8, single, provider, &projection),
            to_mold_score(m, v, 6, 8, provider, &projection) + from_mold_score(m, v, 6, 8, provider, &projection));
}

TEST_F(MoldTest, AddingMoldsNeverRaisesScore) {
  std::mt19937_64 rng(12);
  MoldRegistry small({molds[0]}, tok);
  MoldRegistry large(molds, tok);
  const auto v = sentence("we saw the big red dog ran to the park");
  for (int i = 0; i < 20; ++i) {
    std::size_t s = 1 + rng() % 10;
    std::size_t t = s + rng() % (11 - s);
    if (s == 1 && t == 10) t = 9;
    const double a = dp_ndd("NP", v, s, t, small, provider, &projection);
    const double b = dp_ndd("NP", v, s, t, large, provider, &projection);
    EXPECT_LE(b, a);
    EXPECT_GE(b, 0.0);
  }
}

TEST_F(MoldTest, WholeSentenceFromMoldIsEmptyOverlap) {
  MoldRegistry reg(molds, tok);
  const auto v = sentence("the dog ran");
  EXPECT_THROW(from_mold_score(*reg.select("NP").front(), v, 1, 3, provider, nullptr), Error);
  DpNddScorer strict(reg, provider, &projection);
  EXPECT_THROW(strict.score("NP", v, 1, 3), Error);
  DpNddScorer lenient(reg, provider, &projection, {MoldSelection::kAll, true});
  double best = 1e300;
  for (const auto* m : reg.select("NP")) best = std::min(best, to_mold_score(*m, v, 1, 3, provider, &projection));
  EXPECT_EQ(lenient.score("NP", v, 1, 3), best);
  EXPECT_EQ(lenient.score("NP", v, 1, 2), strict.score("NP", v, 1, 2));
}

TEST(MoldFile, ShippedMoldsLoad) {
  const auto molds = read_molds_json(testing::data_path("molds.json"));
  EXPECT_EQ(molds.size(), 25u);
  std::size_t flagged = 0;
  for (const auto& m : molds) flagged += m.utl ? 1 : 0;
  EXPECT_EQ(flagged, 12u);
  auto vocab = testing::word_vocab({});
  WordLevelTokenizer tok(vocab);
  MoldRegistry reg(molds, tok);
  EXPECT_EQ(reg.labels(), (std::vector<std::string>{"NP", "VP", "ADJP", "ADVP", "PP", "QP", "SBAR", "S", "WHNP",
                                                    "WHADVP", "PRN", "PRT"}));
  std::stringstream ss;
  write_molds_json(ss, molds);
  EXPECT_EQ(read_molds_json(ss), molds);
}

}  // namespace
}  // namespace dpndd
