#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <unistd.h>

#include "rftwin/error.hpp"
#include "rftwin/feature_matrix.hpp"

namespace rftwin::testing {

// Scratch directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("rftwin_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

// Kind of the rftwin::Error thrown by f, or nullopt if nothing was thrown.
template <class F>
std::optional<ErrorKind> thrown_kind(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return std::nullopt;
}

inline FeatureMatrix gaussian_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed, double scale = 1.0,
                                     double shift = 0.0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  FeatureMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (auto& v : m.row(i)) v = shift + scale * n(rng);
  return m;
}

inline FeatureMatrix uniform_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed, double lo = 0.0,
                                    double hi = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(lo, hi);
  FeatureMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (auto& v : m.row(i)) v = u(rng);
  return m;
}

}  // namespace rftwin::testing
