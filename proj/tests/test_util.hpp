#ifndef TETFEC_TESTS_TEST_UTIL_HPP
#define TETFEC_TESTS_TEST_UTIL_HPP

/// Shared helpers for the test suites: random polynomials and fields with
/// class constraints, and double conversion for float cross-checks.

#include "tetfec/field.hpp"
#include "tetfec/random.hpp"

namespace tetfec {

inline double to_double(const Rat& r) { return r.convert_to<double>(); }

inline BaryPoly random_poly(Rng& rng, int dim, int deg) {
  BaryPoly p(dim, deg);
  for (auto& c : p.c)
    if (rng.uniform(0, 3) != 0) c = rng.rat(6, 3);
  return p;
}

/// Random field with the class constraints built in.
inline BaryField random_field(Rng& rng, TensorClass cls, GeomPtr g, int deg) {
  int d = g->dim;
  BaryField f(cls, std::move(g), deg);
  switch (cls) {
    case TensorClass::R: f.comp[0] = random_poly(rng, d, deg); break;
    case TensorClass::R3:
      for (auto& p : f.comp) p = random_poly(rng, d, deg);
      break;
    case TensorClass::M:
      for (auto& p : f.comp) p = random_poly(rng, d, deg);
      break;
    case TensorClass::S:
      for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j) {
          BaryPoly p = random_poly(rng, d, deg);
          f.at(i, j) = p;
          f.at(j, i) = p;
        }
      break;
    case TensorClass::K:
      for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) {
          BaryPoly p = random_poly(rng, d, deg);
          f.at(i, j) = p;
          f.at(j, i) = -p;
        }
      break;
    case TensorClass::T:
      for (auto& p : f.comp) p = random_poly(rng, d, deg);
      f.at(2, 2) = -(f.at(0, 0) + f.at(1, 1));
      break;
  }
  return f;
}

}  // namespace tetfec

#endif
