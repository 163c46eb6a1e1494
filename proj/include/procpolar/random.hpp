#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "procpolar/rational.hpp"

namespace procpolar {

/// Seeded generator whose draws are identical on every platform: mt19937_64
/// output reduced by plain modulo (std distributions are implementation
/// defined).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform integer in [lo, hi].
  std::int64_t uniform(std::int64_t lo, std::int64_t hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(next() % span);
  }
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(next() % n); }
  bool chance(std::uint64_t numerator, std::uint64_t denominator) { return next() % denominator < numerator; }
  /// k / den for k uniform in [0, den].
  Rational unit_fraction(std::int64_t den) { return Rational(uniform(0, den), den); }
  /// k / den for k uniform in [lo_num, hi_num].
  Rational fraction(std::int64_t lo_num, std::int64_t hi_num, std::int64_t den) {
    return Rational(uniform(lo_num, hi_num), den);
  }
  /// Derives an independent child seed.
  std::uint64_t fork() { return next() ^ 0x9e3779b97f4a7c15ULL; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace procpolar
