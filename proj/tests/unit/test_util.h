#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>

#include "unisup/datamodel.h"

namespace unisup::testing {

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("unisup-" + tag + "-" + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

inline std::uint64_t Fnv1a(const std::string& bytes) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

inline StageDistribution Peaked(int label, double mass) {
  StageDistribution d{};
  for (int i = 0; i < kNumRatings; ++i) d[i] = (1.0 - mass) / 4.0;
  d[label] = mass;
  return d;
}

}  // namespace unisup::testing
