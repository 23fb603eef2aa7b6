#include "fixtures.hpp"

#include <fstream>
#include <iterator>
#include <random>

namespace dpndd::testing {

namespace fs = std::filesystem;

fs::path fixture_path(const std::string& name) { return fs::path(DPNDD_TEST_FIXTURES) / name; }

fs::path data_path(const std::string& name) { return fs::path(DPNDD_TEST_DATA) / name; }

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::shared_ptr<const Vocabulary> word_vocab(const std::vector<std::string>& words) {
  std::vector<std::string> entries = {"[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]"};
  entries.insert(entries.end(), words.begin(), words.end());
  return std::make_shared<const Vocabulary>(entries);
}

TempDir::TempDir() {
  std::random_device rd;
  path_ = fs::temp_directory_path() / ("dpndd-test-" + std::to_string(rd()) + std::to_string(rd()));
  fs::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

}  // namespace dpndd::testing
