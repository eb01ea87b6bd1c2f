#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "homopart/corpus.hpp"
#include "homopart/identity_store.hpp"

namespace testing {

inline std::string random_protein(std::mt19937_64& gen, std::size_t length) {
  std::uniform_int_distribution<int> pick(0, 19);
  std::string s;
  for (std::size_t i = 0; i < length; ++i) s.push_back(homopart::kCanonicalResidues[pick(gen)]);
  return s;
}

// Copy of `s` with roughly `rate` of its positions substituted.
inline std::string point_mutant(std::mt19937_64& gen, std::string s, double rate) {
  std::bernoulli_distribution flip(rate);
  std::uniform_int_distribution<int> pick(0, 19);
  for (auto& c : s) {
    if (flip(gen)) c = homopart::kCanonicalResidues[pick(gen)];
  }
  return s;
}

inline homopart::SequenceRecord record(std::string id, std::string residues,
                                       homopart::Label label = homopart::Label::positive) {
  homopart::SequenceRecord r;
  r.id = std::move(id);
  r.residues = std::move(residues);
  r.label = label;
  return r;
}

// Hand-built store over `ids` with the given entries and floor.
inline homopart::IdentityStore toy_store(std::vector<std::string> ids, std::vector<homopart::IdentityEntry> entries,
                                         double floor = 0.1) {
  return homopart::IdentityStore(homopart::StoreParams{}, floor, std::move(ids), std::move(entries));
}

class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("homopart_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

  void write(const std::string& name, const std::string& text) const {
    std::ofstream out(path_ / name, std::ios::binary);
    out << text;
  }

 private:
  std::filesystem::path path_;
};

inline std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace testing
