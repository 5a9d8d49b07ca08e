#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace lipkit {

// Deterministic random source. Raw draws come from mt19937_64 (bit-exact on
// every platform); the distribution shaping is done by hand because the
// standard library's distribution objects are not portable across
// implementations and every report we emit must be reproducible from a seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  // Uniform in [0, 1) with 53 significant bits.
  double uniform01() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Box-Muller without a cached spare, so the draw count per call is fixed.
  double gaussian() {
    double u1 = uniform01();
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    const double u2 = uniform01();
    const double two_pi = 6.283185307179586476925286766559;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
  }

  // Uniform integer in [0, n) by rejection, bias-free.
  std::uint64_t below(std::uint64_t n) {
    if (n == 0) return 0;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t draw = gen_();
    while (draw >= limit) draw = gen_();
    return draw % n;
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace lipkit
