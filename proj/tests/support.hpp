#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>

#include "exogait/model.hpp"

namespace test {

inline std::filesystem::path fixture(const std::string& name) {
  return std::filesystem::path(EXOGAIT_FIXTURES) / name;
}

inline std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "exogait_tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform(double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(engine_() >> 11) * 0x1.0p-53);
  }
  double symmetric(double bound) { return uniform(-bound, bound); }
  exo::Vec5 vec5(double bound) {
    exo::Vec5 v;
    for (int i = 0; i < 5; ++i) v[i] = symmetric(bound);
    return v;
  }
  std::uint64_t raw() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace test
