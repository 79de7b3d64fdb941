// Smoothness-vector arithmetic and the sufficient conditions for div
// surjectivity and exact discrete de Rham sequences.

#include <catch2/catch_amalgamated.hpp>

#include "tetfec/stability.hpp"

using namespace tetfec;

TEST_CASE("smoothness vector validity", "[smoothness]") {
  CHECK(is_valid({4, 2, 1}));
  CHECK_FALSE(is_valid({2, 1, 1}));  // needs r_e >= 2 r_f
  CHECK(is_valid({0, -1, -1}));
  CHECK(is_valid({-1, -1, -1}));
  CHECK_FALSE(is_valid({-1, -1, 0}));
  CHECK_FALSE(is_valid({0, 1, -1}));  // needs r_v >= 2 r_e
  CHECK(is_valid({2, 1, 0}));
}

TEST_CASE("clamped arithmetic", "[smoothness]") {
  CHECK(ominus({1, 0, 0}, 1) == SmoothnessVector{0, -1, -1});
  CHECK(ominus({0, -1, -1}, 1) == SmoothnessVector{-1, -1, -1});
  CHECK(plus({2, 0, -1}) == SmoothnessVector{2, 0, 0});
  CHECK(SmoothnessVector{4, 2, 1} - 1 == SmoothnessVector{3, 1, 0});
  CHECK(SmoothnessVector{0, -1, -1} + 2 == SmoothnessVector{2, 1, 1});

  SECTION("clamp interplay") {
    // (r (-) 1)_+ <= r_+ componentwise, and (-) clamps at -1 exactly.
    std::vector<SmoothnessVector> samples = {
        {4, 2, 1}, {2, 1, 0}, {1, 0, -1}, {0, -1, -1}, {-1, -1, -1}, {3, 1, -1}};
    for (const auto& r : samples) {
      SmoothnessVector a = plus(ominus(r, 1));
      SmoothnessVector b = plus(r);
      CHECK(geq(b, a));
      SmoothnessVector m = ominus(r, 5);
      CHECK(m == SmoothnessVector{-1, -1, -1});
    }
  }
}

TEST_CASE("div stability predicate", "[smoothness]") {
  // The minimal fully continuous pair.
  CHECK(is_div_stable({2, 1, 0}, {1, 0, -1}, 6));
  CHECK_FALSE(is_div_stable({2, 1, 0}, {1, 0, -1}, 5));  // face bubble empty at k=5
  // The minimal low-order pair.
  CHECK(is_div_stable({0, -1, -1}, {-1, -1, -1}, 2));
  CHECK_FALSE(is_div_stable({0, -1, -1}, {-1, -1, -1}, 1));  // dim B_1(f;(0,-1)) = 0
  // Violated compatibility r3 >= r2 (-) 1.
  CHECK_FALSE(is_div_stable({2, 1, 0}, {0, -1, -1}, 8));
  // Invalid vectors are never stable.
  CHECK_FALSE(is_div_stable({2, 1, 1}, {1, 0, 0}, 10));

  SECTION("monotone in k once true") {
    for (int k = 2; k <= 8; ++k) CHECK(is_div_stable({0, -1, -1}, {-1, -1, -1}, k));
    for (int k = 6; k <= 10; ++k) CHECK(is_div_stable({2, 1, 0}, {1, 0, -1}, k));
  }
}

TEST_CASE("tensor div stability predicate", "[smoothness]") {
  CHECK(is_divX_stable({0, -1, -1}, 4, TensorClass::S));
  CHECK_FALSE(is_divX_stable({0, -1, -1}, 3, TensorClass::S));
  CHECK(is_divX_stable({0, -1, -1}, 2, TensorClass::T));
  CHECK(is_divX_stable({1, -1, -1}, 4, TensorClass::T));
  CHECK_FALSE(is_divX_stable({1, -1, -1}, 3, TensorClass::T));
  // The smooth case defers to two scalar div stabilities.
  CHECK(is_divX_stable({2, 1, 0}, 6, TensorClass::S) ==
        (is_div_stable({3, 2, 1}, {2, 1, 0}, 7) && is_div_stable({2, 1, 0}, {1, 0, -1}, 6)));
  CHECK_THROWS_AS(is_divX_stable({0, -1, -1}, 4, TensorClass::R3), std::invalid_argument);
}

TEST_CASE("de Rham sequence validity", "[smoothness]") {
  // Low-order sequence built from r0 = (1,0,0).
  CHECK(is_valid_derham_sequence({1, 0, 0}, {0, -1, -1}, {0, -1, -1}, {-1, -1, -1}, 4));
  // r1 must equal r0 - 1 exactly.
  CHECK_FALSE(is_valid_derham_sequence({1, 0, 0}, {0, 0, 0}, {0, -1, -1}, {-1, -1, -1}, 4));
  // Front four slots of the smoothest sequence used by the Hessian complex.
  CHECK(is_valid_derham_sequence({4, 2, 1}, {3, 1, 0}, {2, 0, -1}, {1, -1, -1}, 9));
  // Tail four slots of the same family.
  CHECK(is_valid_derham_sequence({3, 1, 0}, {2, 0, -1}, {1, -1, -1}, {0, -1, -1}, 9));
  // Degree too small: the k threshold for the same vectors fails.
  CHECK_FALSE(is_valid_derham_sequence({4, 2, 1}, {3, 1, 0}, {2, 0, -1}, {1, -1, -1}, 6));
}
