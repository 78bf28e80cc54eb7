#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <string>

namespace testutil {

inline std::filesystem::path source_dir() { return std::filesystem::path(CUEST_SOURCE_DIR); }

inline std::filesystem::path data_dir() { return source_dir() / "data"; }
inline std::filesystem::path lexicon_dir() { return data_dir() / "lexicons"; }
inline std::filesystem::path fixture_dir() { return source_dir() / "tests" / "fixtures"; }

// Unique scratch directory, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::mt19937_64 rng(std::random_device{}());
    dir_ = std::filesystem::temp_directory_path() /
           ("cuest-test-" + std::to_string(rng()));
    std::filesystem::create_directories(dir_);
  }
  ~TempDir() {
    if (dir_.empty()) return;
    std::error_code ec;
    std::filesystem::remove_all(dir_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  TempDir(TempDir&& other) noexcept : dir_(std::move(other.dir_)) { other.dir_.clear(); }

  const std::filesystem::path& path() const { return dir_; }

  std::filesystem::path write(const std::string& name, const std::string& content) const {
    auto p = dir_ / name;
    std::filesystem::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    out << content;
    return p;
  }

 private:
  std::filesystem::path dir_;
};

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace testutil
