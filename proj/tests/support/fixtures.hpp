#pragma once

#include <atomic>
#include <filesystem>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "dpndd/mold.hpp"
#include "dpndd/tokenizer.hpp"

namespace dpndd::testing {

std::filesystem::path fixture_path(const std::string& name);
std::filesystem::path data_path(const std::string& name);
std::string read_file(const std::filesystem::path& path);

// [PAD] [UNK] [CLS] [SEP] [MASK] followed by `words`.
std::shared_ptr<const Vocabulary> word_vocab(const std::vector<std::string>& words);

// Scores spans with a user function; counts calls.
class FnScorer final : public SpanScorer {
 public:
  using Fn = std::function<double(const std::string&, std::size_t, std::size_t)>;
  explicit FnScorer(Fn fn) : fn_(std::move(fn)) {}

  double score(const std::string& label, const TokenizedSentence&, std::size_t s, std::size_t t) override {
    ++calls_;
    return fn_(label, s, t);
  }
  std::size_t calls() const { return calls_; }

 private:
  Fn fn_;
  std::atomic<std::size_t> calls_ = 0;
};

// Removes the directory on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

}  // namespace dpndd::testing
