#pragma once

#include <cmath>
#include <cstdint>

#include "kyot/core.hpp"

namespace kyot {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace detail

/// Counter-based splittable generator. Every stream is a pure function of
/// (key, counter), so experiment trials can be split deterministically and
/// reproduced bit-for-bit from the seed alone.
class CounterRng {
 public:
  explicit CounterRng(RngSeed seed) : key_(detail::splitmix64(seed.value)) {}

  CounterRng split(std::uint64_t stream) const {
    CounterRng child(*this);
    child.key_ = detail::splitmix64(key_ ^ detail::splitmix64(stream + 0x51ed2701));
    child.ctr_ = 0;
    return child;
  }

  std::uint64_t next_u64() { return detail::splitmix64(key_ ^ (0x2545f4914f6cdd1dULL * ++ctr_)); }

  /// Uniform in (0, 1]; never returns 0 so logs are safe.
  double next_double() {
    return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller; fully portable sequence.
  double next_gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = next_double();
    double u2 = next_double();
    double r = std::sqrt(-2.0 * std::log(u1));
    double theta = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

 private:
  std::uint64_t key_;
  std::uint64_t ctr_ = 0;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace kyot
