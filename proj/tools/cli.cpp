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

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "dpndd/conll.hpp"
#include "dpndd/disturbance.hpp"
#include "dpndd/distribution_cache.hpp"
#include "dpndd/error.hpp"
#include "dpndd/evaluation.hpp"
#include "dpndd/lsg.hpp"
#include "dpndd/mold.hpp"
#include "dpndd/parallel.hpp"
#include "dpndd/pos_projection.hpp"
#include "dpndd/treebank.hpp"
#include "dpndd/utl.hpp"
#include "json.hpp"

namespace dpndd::cli {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct Options {
  // model plumbing
  std::string molds;
  std::string constraints;
  std::string config;
  std::string profile = "tight";
  std::string lexicon;
  std::string lexicon_treebank;
  std::string vocab;
  std::string tokenizer = "wordpiece";
  std::string cache;
  std::string endpoint;
  std::string backend_id;
  std::string metric = "pos-ndd";
  std::string mold_selection;
  std::size_t workers = 1;
  bool quiet = false;

  // commands
  std::vector<std::string> inputs;
  std::string input_format = "auto";
  std::string format = "bracket";
  std::string out;
  std::string json_out;
  std::string label_order;
  std::string labels;
  bool pos_refine = false;
  std::string priors;
  double smoothing = 1.0;
  bool keep_trivial = false;
  bool strip_punct = false;
  bool keep_duplicates = false;
  std::string confusion;
  bool conll = false;
  std::size_t samples = 2000;
  std::uint64_t seed = 0;
  std::string counts_out;
  std::size_t max_len = 10;
};

fs::path data_dir() {
  if (const char* env = std::getenv("DPNDD_DATA_DIR")) return env;
  if (fs::exists(fs::path(DPNDD_INSTALLED_DATA_DIR) / "molds.json")) return DPNDD_INSTALLED_DATA_DIR;
  return DPNDD_SOURCE_DATA_DIR;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

fs::path require_file(const std::string& path, const std::string& flag) {
  if (path.empty()) throw Error(ErrorCode::kConfig, flag + " is required");
  if (!fs::is_regular_file(path)) throw Error(ErrorCode::kConfig, flag + ": no such file " + path);
  return path;
}

class Log {
 public:
  Log(std::ostream& err, bool quiet) : err_(err), quiet_(quiet) {}
  void operator()(const std::string& msg) const {
    if (!quiet_) err_ << "dpndd: " << msg << '\n';
  }

 private:
  std::ostream& err_;
  bool quiet_;
};

// "The/DT cat/NN" per line.
std::vector<LabeledTree> read_tagged(std::istream& in) {
  std::vector<LabeledTree> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ss(line);
    LabeledTree tree;
    for (std::string tok; ss >> tok;) {
      const auto slash = tok.rfind('/');
      if (slash == std::string::npos || slash == 0 || slash + 1 == tok.size()) {
        throw Error(ErrorCode::kMalformedBracket,
                    "line " + std::to_string(line_no) + ": expected word/TAG, got '" + tok + "'");
      }
      tree.words.push_back(tok.substr(0, slash));
      tree.pos.push_back(tok.substr(slash + 1));
    }
    if (!tree.words.empty()) out.push_back(std::move(tree));
  }
  return out;
}

std::vector<LabeledTree> read_input(const std::string& path, const std::string& format) {
  std::ifstream file;
  std::istream* in = &std::cin;
  if (path != "-") {
    file.open(path);
    if (!file) throw Error(ErrorCode::kIo, "cannot open " + path);
    in = &file;
  }
  if (format == "tagged") return read_tagged(*in);
  if (format == "conll") return read_conll(*in);
  if (format == "bracket") return read_treebank(*in, TreebankFormat::kBracket);
  if (format == "jsonl") return read_treebank(*in, TreebankFormat::kJsonLines);
  const std::string text{std::istreambuf_iterator<char>(*in), std::istreambuf_iterator<char>()};
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  std::istringstream ss(text);
  if (text[first] == '(' || text[first] == '{') return read_treebank(ss);
  return read_tagged(ss);
}

// Results go to --out when given, else to stdout.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (path.empty() || path == "-") return;
    file_.open(path);
    if (!file_) throw Error(ErrorCode::kIo, "cannot write " + path);
    stream_ = &file_;
  }
  std::ostream& operator*() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

struct Model {
  std::shared_ptr<const Vocabulary> vocab;
  std::unique_ptr<SubwordTokenizer> tokenizer;
  std::unique_ptr<DistributionProvider> provider;
  std::optional<PosProjection> projection;

  const PosProjection* projection_ptr() const { return projection ? &*projection : nullptr; }
};

Model load_model(const Options& o, const Log& log) {
  Model m;
  m.vocab = std::make_shared<const Vocabulary>(Vocabulary::load(require_file(o.vocab, "--vocab")));
  if (o.tokenizer == "word") {
    m.tokenizer = std::make_unique<WordLevelTokenizer>(m.vocab);
  } else {
    m.tokenizer = std::make_unique<WordPieceTokenizer>(m.vocab);
  }

  std::shared_ptr<DistributionCache> cache;
  if (!o.cache.empty()) cache = std::make_shared<DistributionCache>(fs::path(o.cache));
  if (!o.endpoint.empty()) {
    auto backend = make_backend(o.endpoint, o.backend_id, m.vocab->size());
    if (backend->vocab_size() != m.vocab->size()) {
      throw Error(ErrorCode::kVocabMismatch, "backend vocabulary has " + std::to_string(backend->vocab_size()) +
                                                 " entries, --vocab has " + std::to_string(m.vocab->size()));
    }
    m.provider = std::make_unique<DistributionProvider>(backend, cache);
  } else if (cache) {
    if (o.backend_id.empty()) throw Error(ErrorCode::kConfig, "--backend-id is required for cache-only runs");
    m.provider = std::make_unique<DistributionProvider>(cache, o.backend_id, m.vocab->size());
  } else {
    throw Error(ErrorCode::kConfig, "one of --endpoint or --cache is required");
  }
  log("backend " + m.provider->backend_id() + ", vocabulary " + std::to_string(m.vocab->size()));

  if (o.metric == "pos-ndd") {
    PosLexicon lex;
    if (!o.lexicon.empty()) lex = read_lexicon_tsv(require_file(o.lexicon, "--lexicon"));
    if (!o.lexicon_treebank.empty()) {
      merge_lexicon(lex, lexicon_from_treebank(read_treebank(require_file(o.lexicon_treebank, "--lexicon-treebank"))));
    }
    if (o.lexicon.empty() && o.lexicon_treebank.empty()) {
      throw Error(ErrorCode::kConfig, "--lexicon or --lexicon-treebank is required for --metric pos-ndd");
    }
    m.projection = build_projection(lex, m.vocab->entries());
    log("POS projection with " + std::to_string(m.projection->num_classes()) + " classes");
  }
  return m;
}

fs::path molds_path(const Options& o) {
  return require_file((o.molds.empty() ? data_dir() / "molds.json" : fs::path(o.molds)).string(), "--molds");
}

MoldRegistry load_molds(const Options& o, const SubwordTokenizer& tokenizer) {
  return MoldRegistry(read_molds_json(molds_path(o)), tokenizer);
}

MoldSelection selection(const Options& o, MoldSelection fallback) {
  if (o.mold_selection.empty()) return fallback;
  return o.mold_selection == "utl" ? MoldSelection::kUtlFlagged : MoldSelection::kAll;
}

TreebankFormat output_format(const Options& o) {
  return o.format == "jsonl" ? TreebankFormat::kJsonLines : TreebankFormat::kBracket;
}

void check_tagged(const std::vector<LabeledTree>& trees) {
  for (std::size_t i = 0; i < trees.size(); ++i) {
    if (trees[i].pos.size() != trees[i].words.size()) {
      throw Error(ErrorCode::kConfig, "sentence " + std::to_string(i + 1) + " has no POS tags");
    }
  }
}

int cmd_parse(const Options& o, std::ostream& out, const Log& log) {
  molds_path(o);
  LsgSetup setup;
  const fs::path constraints = o.constraints.empty() ? data_dir() / "constraints.json" : fs::path(o.constraints);
  const fs::path config =
      o.config.empty() ? data_dir() / ("thresholds_" + o.profile + ".json") : fs::path(o.config);
  setup.constraints = read_constraints_json(require_file(constraints.string(), "--constraints"));
  setup.thresholds = read_thresholds_json(require_file(config.string(), "--config"));
  setup.label_order = split_list(o.label_order);
  for (const auto& l : setup.label_order) setup.thresholds.at(l);

  Model model = load_model(o, log);
  const MoldRegistry molds = load_molds(o, *model.tokenizer);
  for (const auto& l : setup.label_order.empty() ? setup.thresholds.label_order() : setup.label_order) {
    molds.select(l, MoldSelection::kAll);
  }
  const auto input = read_input(o.inputs.at(0), o.input_format);
  check_tagged(input);
  log("parsing " + std::to_string(input.size()) + " sentences");

  DpNddScorer scorer(molds, *model.provider, model.projection_ptr(), {selection(o, MoldSelection::kAll), false});
  std::vector<std::vector<ScoredSpan>> parsed(input.size());
  parallel_for(input.size(), o.workers, [&](std::size_t i) {
    const auto sentence = tokenize_sentence(input[i].words, *model.tokenizer);
    parsed[i] = parse_sentence(input[i], sentence, setup, scorer);
  });

  std::vector<LabeledTree> trees;
  for (std::size_t i = 0; i < input.size(); ++i) trees.push_back(spans_to_tree(input[i], parsed[i]));
  Sink sink(o.out, out);
  write_treebank(*sink, trees, output_format(o));
  if (!o.json_out.empty()) {
    Sink js(o.json_out, out);
    for (std::size_t i = 0; i < input.size(); ++i) {
      json spans = json::array();
      for (const auto& s : parsed[i]) spans.push_back({s.start, s.end, s.label, s.score});
      *js << json{{"words", input[i].words}, {"pos", input[i].pos}, {"spans", spans}}.dump() << '\n';
    }
  }
  log("done");
  return kOk;
}

int cmd_label(const Options& o, std::ostream& out, const Log& log) {
  molds_path(o);
  UtlOptions utl;
  utl.labels = split_list(o.labels.empty() ? "NP,VP,ADJP,ADVP,PP" : o.labels);
  utl.workers = o.workers;
  std::optional<PosPrior> priors;
  if (o.pos_refine) {
    auto gold = read_treebank(require_file(o.priors, "--priors"));
    for (auto& t : gold) {
      for (auto& s : t.spans) s.label = bare_label(s.label);
    }
    priors = estimate_priors(gold, utl.labels, o.smoothing);
    utl.priors = &*priors;
  }

  Model model = load_model(o, log);
  const MoldRegistry molds = load_molds(o, *model.tokenizer);
  for (const auto& l : utl.labels) molds.select(l, MoldSelection::kAll);
  const auto input = read_input(o.inputs.at(0), o.input_format);
  if (o.pos_refine) check_tagged(input);
  log("labeling " + std::to_string(input.size()) + " trees");

  std::vector<TokenizedSentence> sentences;
  for (const auto& t : input) sentences.push_back(tokenize_sentence(t.words, *model.tokenizer));
  DpNddScorer scorer(molds, *model.provider, model.projection_ptr(),
                     {selection(o, MoldSelection::kUtlFlagged), true});
  const auto labeled = label_treebank(input, sentences, scorer, utl);

  Sink sink(o.out, out);
  write_treebank(*sink, labeled, output_format(o));
  log("done");
  return kOk;
}

std::vector<LabeledTree> keep_labels(std::vector<LabeledTree> trees, const std::vector<std::string>& labels) {
  if (labels.empty()) return trees;
  for (auto& t : trees) {
    std::erase_if(t.spans, [&](const LabeledSpan& s) {
      return std::find(labels.begin(), labels.end(), s.label) == labels.end();
    });
  }
  return trees;
}

int cmd_eval(const Options& o, std::ostream& out, const Log& log) {
  const auto labels = split_list(o.labels);
  const auto predicted = keep_labels(read_input(o.inputs.at(0), o.input_format), labels);
  const auto gold = keep_labels(read_input(o.inputs.at(1), o.input_format), labels);
  EvalOptions opts{o.keep_trivial, o.strip_punct, !o.keep_duplicates};
  const F1Report unlabeled = unlabeled_f1(predicted, gold, opts);
  const F1Report labeled = labeled_f1(predicted, gold, opts);
  log("evaluated " + std::to_string(gold.size()) + " sentences");

  Sink sink(o.out, out);
  write_report_text(*sink, unlabeled);
  *sink << '\n';
  write_report_text(*sink, labeled);
  if (!o.json_out.empty()) {
    Sink js(o.json_out, out);
    *js << json{{"unlabeled", json::parse(report_json(unlabeled))},
                {"labeled", json::parse(report_json(labeled))}}
               .dump(2)
        << '\n';
  }
  if (!o.confusion.empty()) {
    Sink cm(o.confusion, out);
    write_confusion_csv(*cm, confusion_matrix(predicted, gold, labels));
  }
  return kOk;
}

int cmd_disturb(const Options& o, std::ostream& out, const Log& log) {
  Model model = load_model(o, log);
  const auto trees = read_input(o.inputs.at(0), o.conll ? "conll" : o.input_format);
  const SpanCorpus corpus = build_span_corpus(trees, *model.tokenizer, split_list(o.labels));
  DisturbanceOptions opts;
  opts.size = o.samples;
  opts.metric = o.metric == "ndd" ? DisturbanceMetric::kNdd : DisturbanceMetric::kPosNdd;
  opts.seed = o.seed;
  opts.workers = o.workers;
  log("sampling " + std::to_string(corpus.labels.size() * corpus.labels.size()) + " cells of up to " +
      std::to_string(o.samples) + " pairs");
  const auto matrix = disturbance_matrix(corpus, *model.provider, model.projection_ptr(), opts);

  Sink sink(o.out, out);
  write_disturbance_csv(*sink, matrix);
  if (!o.counts_out.empty()) {
    Sink counts(o.counts_out, out);
    write_sample_counts_csv(*counts, matrix);
  }
  if (!o.json_out.empty()) {
    Sink js(o.json_out, out);
    *js << json{{"labels", matrix.labels}, {"mean", matrix.mean}, {"samples", matrix.samples}}.dump(2) << '\n';
  }
  return kOk;
}

int cmd_cache(const Options& o, std::ostream& out, const Log& log) {
  if (o.cache.empty()) throw Error(ErrorCode::kConfig, "--cache is required");
  if (o.endpoint.empty()) throw Error(ErrorCode::kConfig, "--endpoint is required to fill a cache");
  Options plain = o;
  plain.metric = "ndd";
  Model model = load_model(plain, log);

  std::vector<std::vector<std::string>> sentences;
  if (!o.molds.empty() || o.inputs.empty()) {
    for (const auto& m : read_molds_json(molds_path(o))) sentences.push_back(m.words);
  }
  for (const auto& in : o.inputs) {
    for (auto& t : read_input(in, o.input_format)) sentences.push_back(std::move(t.words));
  }
  std::atomic<std::size_t> queries{0};
  parallel_for(sentences.size(), o.workers, [&](std::size_t i) {
    const auto ids = tokenize_sentence(sentences[i], *model.tokenizer).ids;
    std::vector<MaskQuery> batch;
    for (std::size_t k = 0; k < ids.size(); ++k) batch.push_back({ids, static_cast<std::uint32_t>(k)});
    model.provider->get_distributions_batch(batch);
    queries += batch.size();
  });
  log("prefetched " + std::to_string(queries.load()) + " masked queries");
  out << "records " << model.provider->cache()->size() << '\n';
  return kOk;
}

std::vector<fs::path> treebank_files(const std::vector<std::string>& inputs) {
  std::vector<fs::path> files;
  for (const auto& in : inputs) {
    if (fs::is_directory(in)) {
      for (const auto& e : fs::recursive_directory_iterator(in)) {
        auto ext = e.path().extension().string();
        std::transform(ext.begin(), ext.end(), ext.begin(), ::tolower);
        if (e.is_regular_file() && ext == ".mrg") files.push_back(e.path());
      }
    } else {
      files.push_back(require_file(in, "input"));
    }
  }
  std::sort(files.begin(), files.end());
  return files;
}

int cmd_wsj10(const Options& o, std::ostream& out, const Log& log) {
  std::vector<LabeledTree> trees;
  const auto files = treebank_files(o.inputs);
  for (const auto& f : files) {
    auto part = read_treebank(f, TreebankFormat::kBracket);
    trees.insert(trees.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
  }
  log("read " + std::to_string(trees.size()) + " trees from " + std::to_string(files.size()) + " files");
  Wsj10Options opts;
  opts.max_len = o.max_len;
  opts.strip_punct = o.strip_punct;
  if (!o.labels.empty()) {
    const auto labels = split_list(o.labels);
    opts.labels = {labels.begin(), labels.end()};
  }
  const auto wsj10 = build_wsj10(trees, opts);
  const std::string summary = "sentences " + std::to_string(wsj10.size()) + " constituents " +
                              std::to_string(count_constituents(wsj10));
  if (o.out.empty()) {
    write_treebank(out, wsj10, output_format(o));
    log(summary);
  } else {
    Sink sink(o.out, out);
    write_treebank(*sink, wsj10, output_format(o));
    out << summary << '\n';
  }
  return kOk;
}

void add_model_options(CLI::App* sub, Options& o) {
  sub->add_option("--molds", o.molds, "Mold file (JSON)");
  sub->add_option("--lexicon", o.lexicon, "word<TAB>POS lexicon for the POS projection");
  sub->add_option("--lexicon-treebank", o.lexicon_treebank, "Treebank whose tagged words extend the lexicon");
  sub->add_option("--vocab", o.vocab, "Vocabulary file of the masked LM, one entry per line");
  sub->add_option("--tokenizer", o.tokenizer, "Subword tokenizer")->check(CLI::IsMember({"wordpiece", "word"}));
  sub->add_option("--cache", o.cache, "Distribution cache file");
  sub->add_option("--endpoint", o.endpoint, "http://host:port, mock or mock:<vocab>[:<seed>]");
  sub->add_option("--backend-id", o.backend_id, "Backend identifier (cache key namespace)");
  sub->add_option("--metric", o.metric, "Divergence metric")->check(CLI::IsMember({"ndd", "pos-ndd"}));
  sub->add_option("--mold-selection", o.mold_selection, "Molds used for scoring")
      ->check(CLI::IsMember({"all", "utl"}));
  sub->add_option("--workers", o.workers, "Worker threads")->check(CLI::PositiveNumber);
}

void add_input_options(CLI::App* sub, Options& o, std::size_t count) {
  sub->add_option("inputs", o.inputs, "Input files ('-' for stdin)")->expected(static_cast<int>(count))->required();
  sub->add_option("--input-format", o.input_format, "Input format")
      ->check(CLI::IsMember({"auto", "bracket", "jsonl", "tagged", "conll"}));
}

int map_error(const Error& e, std::ostream& err) {
  err << "dpndd: error: " << e.what() << '\n';
  return e.code() == ErrorCode::kConfig ? kConfigError : kRuntimeFailure;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Constituency parsing and labeling with dual POS-NDD molds", "dpndd"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_flag("--quiet", o.quiet, "Suppress progress messages");

  auto* parse = app.add_subcommand("parse", "Generate labeled spans for POS-tagged sentences");
  add_model_options(parse, o);
  add_input_options(parse, o, 1);
  parse->add_option("--constraints", o.constraints, "POS constraint table (JSON)");
  parse->add_option("--config", o.config, "Threshold/tolerance file (JSON); overrides --profile");
  parse->add_option("--profile", o.profile, "Built-in threshold profile")
      ->check(CLI::IsMember({"tight", "loose"}));
  parse->add_option("--label-order", o.label_order, "Comma-separated label processing order");
  parse->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"bracket", "jsonl"}));
  parse->add_option("--out", o.out, "Output treebank (default stdout)");
  parse->add_option("--json-out", o.json_out, "Scored spans, one JSON object per sentence");

  auto* label = app.add_subcommand("label", "Label the spans of unlabeled trees");
  add_model_options(label, o);
  add_input_options(label, o, 1);
  label->add_option("--labels", o.labels, "Comma-separated candidate labels, ties go to the first");
  label->add_flag("--pos-refine", o.pos_refine, "Weight scores with POS priors from --priors");
  label->add_option("--priors", o.priors, "Labeled treebank for estimating POS priors");
  label->add_option("--smoothing", o.smoothing, "Additive smoothing for the priors")->check(CLI::NonNegativeNumber);
  label->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"bracket", "jsonl"}));
  label->add_option("--out", o.out, "Output treebank (default stdout)");

  auto* eval = app.add_subcommand("eval", "Score predicted trees against gold trees");
  add_input_options(eval, o, 2);
  eval->add_option("--labels", o.labels, "Only evaluate spans with these labels");
  eval->add_flag("--keep-trivial-spans", o.keep_trivial, "Count single-word and whole-sentence spans");
  eval->add_flag("--strip-punct", o.strip_punct, "Remove punctuation tokens before matching");
  eval->add_flag("--keep-duplicates", o.keep_duplicates, "Match spans as multisets");
  eval->add_option("--out", o.out, "Text report (default stdout)");
  eval->add_option("--json-out", o.json_out, "JSON report");
  eval->add_option("--confusion", o.confusion, "Confusion matrix CSV (requires identical span sets)");

  auto* disturb = app.add_subcommand("disturb", "Disturbance matrix over labeled spans");
  add_model_options(disturb, o);
  add_input_options(disturb, o, 1);
  disturb->add_flag("--conll", o.conll, "Read the corpus as CoNLL columns with BIO entity tags");
  disturb->add_option("--labels", o.labels, "Comma-separated labels (default: all)");
  disturb->add_option("--samples", o.samples, "Pairs per label pair")->check(CLI::PositiveNumber);
  disturb->add_option("--seed", o.seed, "Sampling seed");
  disturb->add_option("--out", o.out, "Mean divergence CSV (default stdout)");
  disturb->add_option("--counts-out", o.counts_out, "Sample count CSV");
  disturb->add_option("--json-out", o.json_out, "Matrix as JSON");

  auto* cache = app.add_subcommand("cache", "Prefetch the masked queries of sentences and molds into a cache");
  add_model_options(cache, o);
  cache->add_option("inputs", o.inputs, "Sentence files");
  cache->add_option("--input-format", o.input_format, "Input format")
      ->check(CLI::IsMember({"auto", "bracket", "jsonl", "tagged", "conll"}));

  auto* wsj10 = app.add_subcommand("wsj10", "Build WSJ-10 from PTB .mrg files or directories");
  wsj10->add_option("inputs", o.inputs, "Files or directories")->required();
  wsj10->add_option("--max-len", o.max_len, "Keep sentences with fewer words than this");
  wsj10->add_option("--labels", o.labels, "Constituent labels to keep");
  wsj10->add_flag("--strip-punct", o.strip_punct, "Remove punctuation first");
  wsj10->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"bracket", "jsonl"}));
  wsj10->add_option("--out", o.out, "Output treebank (default stdout)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigError;
  }

  const Log log(err, o.quiet);
  try {
    if (*parse) return cmd_parse(o, out, log);
    if (*label) return cmd_label(o, out, log);
    if (*eval) return cmd_eval(o, out, log);
    if (*disturb) return cmd_disturb(o, out, log);
    if (*cache) return cmd_cache(o, out, log);
    return cmd_wsj10(o, out, log);
  } catch (const Error& e) {
    return map_error(e, err);
  } catch (const std::exception& e) {
    err << "dpndd: error: " << e.what() << '\n';
    return kRuntimeFailure;
  }
}

}  // namespace dpndd::cli
