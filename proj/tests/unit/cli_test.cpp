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

#include "cli.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "dpndd/evaluation.hpp"
#include "dpndd/treebank.hpp"
#include "fixtures.hpp"
#include "json.hpp"

namespace dpndd {
namespace {

using testing::fixture_path;
using testing::read_file;

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> model_args() {
  return {"--vocab",      fixture_path("vocab.txt").string(),
          "--tokenizer",  "word",
          "--endpoint",   "mock",
          "--lexicon-treebank", fixture_path("gold.mrg").string(),
          "--quiet"};
}

std::vector<std::string> with_model(std::vector<std::string> args) {
  const auto m = model_args();
  args.insert(args.end(), m.begin(), m.end());
  return args;
}

TEST(Cli, NoSubcommandIsUsageError) {
  EXPECT_EQ(run({}).code, cli::kConfigError);
  EXPECT_EQ(run({"frobnicate"}).code, cli::kConfigError);
}

TEST(Cli, MissingMoldsNamesThePath) {
  const auto r = run(with_model({"parse", fixture_path("sentences.tagged").string(), "--molds", "/nonexist.json"}));
  EXPECT_EQ(r.code, cli::kConfigError);
  EXPECT_NE(r.err.find("/nonexist.json"), std::string::npos) << r.err;
}

TEST(Cli, MissingInputIsRuntimeFailure) {
  const auto r = run(with_model({"parse", "/nonexistent/input.tagged"}));
  EXPECT_EQ(r.code, cli::kRuntimeFailure);
  EXPECT_NE(r.err.find("cannot open"), std::string::npos) << r.err;
}

TEST(Cli, EmptyInputGivesEmptyOutput) {
  testing::TempDir tmp;
  std::ofstream(tmp / "empty.tagged").close();
  const auto r = run(with_model({"parse", (tmp / "empty.tagged").string()}));
  EXPECT_EQ(r.code, cli::kOk) << r.err;
  EXPECT_EQ(r.out, "");
}

TEST(Cli, ParseMatchesGolden) {
  const auto r = run(with_model({"parse", fixture_path("sentences.tagged").string()}));
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  EXPECT_EQ(r.out, read_file(fixture_path("golden/parse_tight.mrg")));
}

TEST(Cli, LabelMatchesGolden) {
  const auto r = run(with_model({"label", fixture_path("gold.mrg").string(), "--pos-refine", "--priors",
                                 fixture_path("gold.mrg").string()}));
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  EXPECT_EQ(r.out, read_file(fixture_path("golden/label_pos.mrg")));
}

TEST(Cli, EvalIdentityAndJson) {
  testing::TempDir tmp;
  const auto gold = fixture_path("gold.mrg").string();
  auto r = run({"eval", gold, gold, "--quiet"});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  EXPECT_NE(r.out.find("all        100.00   100.00   100.00"), std::string::npos) << r.out;

  const auto pred = fixture_path("eval/predicted.mrg").string();
  r = run({"eval", pred, gold, "--json-out", (tmp / "eval.json").string(), "--quiet"});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  const auto p = read_treebank(fixture_path("eval/predicted.mrg"));
  const auto g = read_treebank(fixture_path("gold.mrg"));
  const auto j = nlohmann::json::parse(read_file(tmp / "eval.json"));
  EXPECT_EQ(j["labeled"], nlohmann::json::parse(report_json(labeled_f1(p, g))));
  EXPECT_EQ(j["unlabeled"], nlohmann::json::parse(report_json(unlabeled_f1(p, g))));
}

TEST(Cli, ConfusionCsv) {
  testing::TempDir tmp;
  const auto r = run({"eval", fixture_path("eval/relabeled.mrg").string(), fixture_path("gold.mrg").string(),
                      "--confusion", (tmp / "c.csv").string(), "--quiet"});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  EXPECT_EQ(read_file(tmp / "c.csv").substr(0, 15), "gold\\predicted,");
}

TEST(Cli, DisturbIsDeterministic) {
  const auto args = with_model({"disturb", fixture_path("gold.mrg").string(), "--labels", "NP,VP", "--samples",
                                "5", "--seed", "3"});
  const auto a = run(args);
  const auto b = run(args);
  ASSERT_EQ(a.code, cli::kOk) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.out.substr(0, 17), "host\\donor,NP,VP\n");
}

TEST(Cli, Wsj10CountsFixture) {
  const auto r = run({"wsj10", fixture_path("gold.mrg").string(), "--max-len", "7", "--out", "/dev/null"});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  // Fewer than 7 words: the first three sentences, with 2 + 3 + 5 NP/VP/ADJP/ADVP/PP spans.
  EXPECT_EQ(r.out, "sentences 3 constituents 10\n");
}

}  // namespace
}  // namespace dpndd
