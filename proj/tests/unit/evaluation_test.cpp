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

#include "dpndd/evaluation.hpp"

#include <gtest/gtest.h>

#include <optional>
#include <random>
#include <sstream>

#include "dpndd/error.hpp"
#include "eval_fixture.hpp"
#include "json.hpp"

namespace dpndd {
namespace {

LabeledTree words(std::size_t n, std::vector<LabeledSpan> spans) {
  LabeledTree t;
  for (std::size_t i = 0; i < n; ++i) t.words.push_back("w" + std::to_string(i));
  t.spans = std::move(spans);
  return t;
}

std::optional<ErrorCode> code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

TEST(UnlabeledF1, TwoOfThreeAgainstFour) {
  const auto gold = words(8, {{1, 2, "NP"}, {3, 8, "VP"}, {4, 8, "PP"}, {5, 8, "NP"}});
  const auto pred = words(8, {{1, 2, "X"}, {3, 8, "X"}, {2, 3, "X"}});
  const auto r = unlabeled_f1({pred}, {gold});
  EXPECT_EQ(r.matched, 2u);
  EXPECT_DOUBLE_EQ(r.precision, 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(r.recall, 0.5);
  EXPECT_NEAR(r.f1, 4.0 / 7.0, 1e-12);
  EXPECT_NEAR(r.f1 * 100, 57.1, 0.05);
}

TEST(UnlabeledF1, EmptyPredictionIsZero) {
  const auto gold = words(5, {{1, 2, "NP"}, {3, 5, "VP"}});
  const auto r = unlabeled_f1({words(5, {})}, {gold});
  EXPECT_EQ(r.precision, 0.0);
  EXPECT_EQ(r.recall, 0.0);
  EXPECT_EQ(r.f1, 0.0);
}

TEST(UnlabeledF1, TrivialSpansExcludedByDefault) {
  const auto gold = words(4, {{1, 4, "S"}, {1, 1, "NP"}, {2, 4, "VP"}});
  const auto pred = words(4, {{1, 4, "S"}, {3, 3, "NP"}});
  auto r = unlabeled_f1({pred}, {gold});
  EXPECT_EQ(r.gold, 1u);
  EXPECT_EQ(r.predicted, 0u);
  r = unlabeled_f1({pred}, {gold}, {.keep_trivial = true});
  EXPECT_EQ(r.gold, 3u);
  EXPECT_EQ(r.predicted, 2u);
  EXPECT_EQ(r.matched, 1u);
}

TEST(UnlabeledF1, DuplicateSpans) {
  const auto gold = words(5, {{2, 4, "VP"}, {2, 4, "S"}});
  const auto pred = words(5, {{2, 4, "X"}});
  auto r = unlabeled_f1({pred}, {gold});
  EXPECT_EQ(r.gold, 1u);
  EXPECT_EQ(r.f1, 1.0);
  r = unlabeled_f1({pred}, {gold}, {.collapse_duplicates = false});
  EXPECT_EQ(r.gold, 2u);
  EXPECT_EQ(r.matched, 1u);
}

TEST(UnlabeledF1, PerLabelRecall) {
  const auto gold = words(6, {{1, 2, "NP"}, {3, 6, "VP"}, {4, 6, "NP"}});
  const auto pred = words(6, {{1, 2, "VP"}, {3, 6, "VP"}});
  const auto r = unlabeled_f1({pred}, {gold});
  EXPECT_EQ(r.per_label.at("NP").gold, 2u);
  EXPECT_EQ(r.per_label.at("NP").matched, 1u);
  EXPECT_DOUBLE_EQ(r.per_label.at("NP").recall, 0.5);
  EXPECT_DOUBLE_EQ(r.per_label.at("VP").recall, 1.0);
}

TEST(UnlabeledF1, PunctuationStripping) {
  LabeledTree gold = words(4, {{1, 2, "NP"}, {1, 3, "S"}});
  gold.pos = {"DT", "NN", "VBZ", "."};
  const auto pred = words(4, {{1, 2, "X"}, {2, 4, "X"}});
  auto r = unlabeled_f1({pred}, {gold});
  EXPECT_EQ(r.gold, 2u);
  // Without the final ".", (1,3) covers the sentence and (2,4) becomes (2,3).
  r = unlabeled_f1({pred}, {gold}, {.strip_punct = true});
  EXPECT_EQ(r.gold, 1u);
  EXPECT_EQ(r.predicted, 2u);
  EXPECT_EQ(r.matched, 1u);
}

TEST(LabeledF1, PerLabelStats) {
  const auto gold = words(6, {{1, 2, "NP"}, {3, 6, "VP"}, {4, 6, "NP"}});
  const auto pred = words(6, {{1, 2, "NP"}, {3, 6, "NP"}, {4, 5, "PP"}});
  const auto r = labeled_f1({pred}, {gold});
  EXPECT_TRUE(r.labeled);
  EXPECT_EQ(r.matched, 1u);
  const auto& np = r.per_label.at("NP");
  EXPECT_EQ(np.gold, 2u);
  EXPECT_EQ(np.predicted, 2u);
  EXPECT_EQ(np.matched, 1u);
  EXPECT_DOUBLE_EQ(np.f1, 0.5);
  EXPECT_EQ(r.per_label.at("PP").precision, 0.0);
  EXPECT_EQ(r.per_label.at("VP").recall, 0.0);
}

TEST(Evaluation, ShapeErrors) {
  const auto t = words(3, {});
  EXPECT_EQ(code_of([&] { unlabeled_f1({t, t}, {t}); }), ErrorCode::kSentenceCountMismatch);
  EXPECT_EQ(code_of([&] { labeled_f1({words(4, {})}, {t}); }), ErrorCode::kTokenMismatch);
  EXPECT_EQ(code_of([&] { confusion_matrix({t}, {}, {}); }), ErrorCode::kSentenceCountMismatch);
  EXPECT_EQ(code_of([&] { confusion_matrix({words(3, {{1, 2, "NP"}})}, {words(3, {{2, 3, "NP"}})}, {}); }),
            ErrorCode::kSpanSetMismatch);
  EXPECT_EQ(code_of([&] { unlabeled_f1({t}, {t}, {.strip_punct = true}); }), ErrorCode::kConfig);
}

std::vector<LabeledTree> random_bank(std::mt19937_64& rng, std::size_t count) {
  const std::vector<std::string> labels{"NP", "VP", "PP"};
  std::vector<LabeledTree> out;
  for (std::size_t i = 0; i < count; ++i) {
    std::vector<LabeledSpan> spans;
    for (int k = 0; k < 6; ++k) {
      const std::size_t s = 1 + rng() % 8;
      spans.push_back({s, s + rng() % (9 - s), labels[rng() % 3]});
    }
    out.push_back(words(8, spans));
  }
  return out;
}

TEST(Evaluation, IdentityAndSymmetry) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 50; ++trial) {
    const auto a = random_bank(rng, 5);
    const auto b = random_bank(rng, 5);
    for (bool collapse : {true, false}) {
      const EvalOptions opt{.collapse_duplicates = collapse};
      for (const auto& self : {unlabeled_f1(a, a, opt), labeled_f1(a, a, opt)}) {
        if (self.gold > 0) {
          EXPECT_DOUBLE_EQ(self.f1, 1.0);
        }
      }
      EXPECT_DOUBLE_EQ(unlabeled_f1(a, b, opt).f1, unlabeled_f1(b, a, opt).f1);
      EXPECT_DOUBLE_EQ(labeled_f1(a, b, opt).f1, labeled_f1(b, a, opt).f1);
      EXPECT_LE(labeled_f1(a, b, opt).matched, unlabeled_f1(a, b, opt).matched);
    }
  }
}

TEST(ConfusionMatrix, RowsGoldColumnsPredicted) {
  const auto gold = words(5, {{1, 2, "NP"}, {3, 5, "VP"}, {3, 5, "S"}});
  const auto pred = words(5, {{1, 2, "VP"}, {3, 5, "VP"}, {3, 5, "NP"}});
  const auto m = confusion_matrix({pred}, {gold}, {"NP", "VP"});
  EXPECT_EQ(m.labels, (std::vector<std::string>{"NP", "VP", "S"}));
  EXPECT_EQ(m.at("NP", "VP"), 1u);
  EXPECT_EQ(m.at("VP", "VP"), 1u);
  EXPECT_EQ(m.at("S", "NP"), 1u);
  EXPECT_EQ(m.at("VP", "NP"), 0u);
  EXPECT_THROW(m.at("PP", "NP"), Error);
}

TEST(ConfusionMatrix, RowSumsEqualGoldCounts) {
  std::mt19937_64 rng(17);
  const std::vector<std::string> labels{"NP", "VP", "PP"};
  auto gold = random_bank(rng, 20);
  auto pred = gold;
  std::map<std::string, std::size_t> gold_counts;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    for (std::size_t k = 0; k < gold[i].spans.size(); ++k) {
      ++gold_counts[gold[i].spans[k].label];
      pred[i].spans[k].label = labels[rng() % 3];
    }
  }
  const auto m = confusion_matrix(pred, gold, labels);
  for (std::size_t r = 0; r < m.labels.size(); ++r) {
    std::size_t sum = 0;
    for (auto c : m.counts[r]) sum += c;
    EXPECT_EQ(sum, gold_counts[m.labels[r]]);
  }
}

TEST(EvaluationFixture, MatchesHandArithmetic) {
  const auto errors = testing::check_eval_fixture();
  for (const auto& e : errors) ADD_FAILURE() << e;
}

TEST(Reports, JsonAndTextAgree) {
  const auto gold = words(6, {{1, 2, "NP"}, {3, 6, "VP"}});
  const auto pred = words(6, {{1, 2, "NP"}, {3, 5, "VP"}});
  const auto r = labeled_f1({pred}, {gold});
  const auto j = nlohmann::json::parse(report_json(r));
  EXPECT_EQ(j["matched"], 1);
  EXPECT_DOUBLE_EQ(j["per_label"]["NP"]["f1"].get<double>(), 1.0);
  std::ostringstream text;
  write_report_text(text, r);
  EXPECT_NE(text.str().find("labeled"), std::string::npos);
  EXPECT_NE(text.str().find("all         50.00    50.00    50.00"), std::string::npos) << text.str();
  std::ostringstream csv;
  write_confusion_csv(csv, confusion_matrix({words(3, {{1, 2, "NP"}})}, {words(3, {{1, 2, "VP"}})}, {"NP"}));
  EXPECT_EQ(csv.str(), "gold\\predicted,NP,VP\nNP,0,0\nVP,1,0\n");
}

}  // namespace
}  // namespace dpndd
