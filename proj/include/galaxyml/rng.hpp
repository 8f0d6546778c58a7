#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <utility>
#include <vector>

#include "galaxyml/matrix.hpp"

namespace galaxyml {

// Deterministic random source used everywhere randomness is needed.
//
// The core engine is std::mt19937 (output sequence fixed by the C++
// standard) and every derivation below is spelled out, so a seed produces
// the same stream on any platform:
//   uniform_index(n)  rejection sampling over raw 32-bit draws
//   uniform_real()    53-bit value from two engine draws, in [0, 1)
//   gaussian()        Box-Muller over two uniform_real() draws
//   shuffle(v)        Fisher-Yates, descending index
class Rng {
 public:
  explicit Rng(std::uint64_t seed)
      : engine_(static_cast<std::uint32_t>(seed & 0xffffffffu)) {}

  std::uint32_t next_u32() { return engine_(); }

  // Unbiased integer in [0, n).
  std::size_t uniform_index(std::size_t n) {
    require(n > 0, "uniform_index: n must be positive");
    const std::uint64_t span = std::uint64_t{1} << 32;
    const std::uint64_t limit = span - span % n;
    std::uint64_t draw = 0;
    do {
      draw = next_u32();
    } while (draw >= limit);
    return static_cast<std::size_t>(draw % n);
  }

  // Uniform in [0, 1) with 53 random mantissa bits.
  double uniform_real() {
    const std::uint64_t hi = next_u32() >> 5;  // 27 bits
    const std::uint64_t lo = next_u32() >> 6;  // 26 bits
    return (static_cast<double>(hi) * 67108864.0 + static_cast<double>(lo)) /
           9007199254740992.0;
  }

  double uniform_real(double lo, double hi) {
    return lo + (hi - lo) * uniform_real();
  }

  // Standard normal draw.
  double gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    do {
      u1 = uniform_real();
    } while (u1 <= 0.0);
    const double u2 = uniform_real();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

  template <typename T>
  void shuffle(std::vector<T>& values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      std::swap(values[i - 1], values[uniform_index(i)]);
    }
  }

 private:
  std::mt19937 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Independent child-stream seed for (task, subtask) style work such as
// search candidates, CV folds, or permutation repeats.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a,
                                 std::uint64_t b = 0) {
  return splitmix64(splitmix64(splitmix64(seed) + a) + b);
}

}  // namespace galaxyml
