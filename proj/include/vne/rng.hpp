#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "vne/amount.hpp"

namespace vne {

// Seeded RNG facade. All sampling goes through these helpers instead of
// <random> distributions, whose output is implementation-defined; this keeps
// generated artifacts reproducible from the seed alone.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  // Uniform integer in [lo, hi], inclusive. Unbiased via rejection.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    const std::uint64_t range = static_cast<std::uint64_t>(hi - lo) + 1;
    if (range == 0) return static_cast<std::int64_t>(next_u64());  // full span
    const std::uint64_t zone = (UINT64_MAX / range) * range;
    std::uint64_t x;
    do {
      x = next_u64();
    } while (x >= zone);
    return lo + static_cast<std::int64_t>(x % range);
  }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform_real(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Exponential with the given rate (events per time unit), inverse CDF.
  double exponential(double rate) { return -std::log1p(-uniform01()) / rate; }

  // Uniform two-decimal value in [lo, hi].
  Amount uniform_amount(Amount lo, Amount hi) {
    return Amount::from_centi(uniform_int(lo.centi(), hi.centi()));
  }

  template <class T>
  const T& choice(const std::vector<T>& v) {
    return v[static_cast<std::size_t>(uniform_int(0, static_cast<std::int64_t>(v.size()) - 1))];
  }

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(uniform_int(0, static_cast<std::int64_t>(i) - 1));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace vne
