#ifndef TETFEC_RANDOM_HPP
#define TETFEC_RANDOM_HPP

/// Deterministic random rationals for property checks. Fixed seeds give
/// byte-identical runs, which the report determinism contract relies on.

#include <cstdint>
#include <random>

#include "tetfec/rat.hpp"

namespace tetfec {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  long uniform(long lo, long hi) {
    return std::uniform_int_distribution<long>(lo, hi)(gen_);
  }

  /// Small rational with numerator in [-num_max, num_max], denominator in [1, den_max].
  Rat rat(long num_max = 9, long den_max = 3) {
    return make_rat(uniform(-num_max, num_max), uniform(1, den_max));
  }

  /// Nonzero variant for pivots/directions.
  Rat nonzero_rat(long num_max = 9, long den_max = 3) {
    for (;;) {
      Rat r = rat(num_max, den_max);
      if (r != 0) return r;
    }
  }

  Vec3 vec3(long num_max = 9, long den_max = 3) {
    return {rat(num_max, den_max), rat(num_max, den_max), rat(num_max, den_max)};
  }

  Vec3 nonzero_vec3(long num_max = 9, long den_max = 3) {
    for (;;) {
      Vec3 v = vec3(num_max, den_max);
      if (!v.is_zero()) return v;
    }
  }

  Mat3 mat3(long num_max = 9, long den_max = 3) {
    Mat3 m;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) m(i, j) = rat(num_max, den_max);
    return m;
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace tetfec

#endif
