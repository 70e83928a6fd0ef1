#pragma once

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <iterator>
#include <set>
#include <sstream>
#include <string>
#include <unordered_set>
#include <vector>

#include "depechemood/corpus.hpp"
#include "depechemood/textpipe.hpp"
#include "oracles.hpp"

namespace fixtures {

inline std::vector<depechemood::DocumentRecord> to_records(const std::vector<oracle::Doc>& docs) {
  std::vector<depechemood::DocumentRecord> out;
  for (const auto& d : docs) {
    depechemood::DocumentRecord r;
    r.id = d.id;
    for (const auto& t : d.tokens) r.tokens.push_back(depechemood::LemmaPos::parse(t));
    r.votes = depechemood::validate_votes(d.votes);
    out.push_back(std::move(r));
  }
  return out;
}

inline depechemood::VocabularyFilter to_vocab(const std::set<std::string>& vocab) {
  return depechemood::VocabularyFilter(std::unordered_set<std::string>(vocab.begin(), vocab.end()));
}

/// Scratch directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("depechemood_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::string file(const std::string& name) const { return (path_ / name).string(); }
  std::string write(const std::string& name, const std::string& content) const {
    std::ofstream(file(name), std::ios::binary) << content;
    return file(name);
  }

 private:
  std::filesystem::path path_;
};

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline std::string corpus_jsonl(const std::vector<oracle::Doc>& docs,
                                const std::vector<std::string>& labels) {
  std::ostringstream out;
  out.precision(17);
  for (const auto& d : docs) {
    out << "{\"id\":\"" << d.id << "\",\"tokens\":[";
    for (std::size_t i = 0; i < d.tokens.size(); ++i) out << (i ? "," : "") << '"' << d.tokens[i] << '"';
    out << "],\"votes\":{";
    for (std::size_t e = 0; e < d.votes.size(); ++e) out << (e ? "," : "") << '"' << labels[e] << "\":" << d.votes[e];
    out << "}}\n";
  }
  return out.str();
}

}  // namespace fixtures
