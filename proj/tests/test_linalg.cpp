#include <catch2/catch_amalgamated.hpp>

#include "tetfec/linalg.hpp"
#include "tetfec/random.hpp"

using namespace tetfec;

namespace {

RatMatrix from_strings(const std::vector<std::vector<const char*>>& rows) {
  RatMatrix m(static_cast<int>(rows.size()), static_cast<int>(rows[0].size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      m.at(static_cast<int>(i), static_cast<int>(j)) = parse_rat(rows[i][j]);
  return m;
}

RatMatrix random_matrix(Rng& rng, int r, int c, int nummax = 9) {
  RatMatrix m(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j)
      if (rng.uniform(0, 2) != 0) m.at(i, j) = rng.rat(nummax, 3);
  return m;
}

}  // namespace

// Frozen case; values cross-checked by tools/oracles/expected_values.py
// (section "linalg: fixed matrices").
TEST_CASE("rank and nullspace of a fixed rational matrix") {
  RatMatrix A = from_strings({{"1/2", "2", "-3", "4"},
                              {"0", "-2/3", "1", "5/7"},
                              {"1", "10/3", "-5", "61/7"},
                              {"3", "1", "0", "-1"}});
  CHECK(rank_exact(A) == 3);
  CHECK(rank_float(A) == 3);
}

TEST_CASE("nullspace matches the oracle vector") {
  RatMatrix A = from_strings({{"1/2", "2", "-3", "4"},
                              {"0", "-2/3", "1", "5/7"},
                              {"1", "10/3", "-5", "61/7"},
                              {"3", "1", "0", "-1"}});
  RatMatrix ns = nullspace(A);
  REQUIRE(ns.cols == 1);
  // Scale so the last entry is 1 and compare with the oracle's vector.
  Rat s = ns.at(3, 0);
  REQUIRE(s != 0);
  CHECK(ns.at(0, 0) / s == parse_rat("-86/7"));
  CHECK(ns.at(1, 0) / s == parse_rat("265/7"));
  CHECK(ns.at(2, 0) / s == parse_rat("515/21"));
  // A * ns == 0 exactly.
  CHECK((A * ns).is_zero());
}

TEST_CASE("inverse of a fixed integer matrix") {
  RatMatrix B = from_strings({{"2", "1", "1"}, {"1", "3", "2"}, {"1", "0", "0"}});
  auto inv = inverse(B);
  REQUIRE(inv.has_value());
  RatMatrix expect = from_strings({{"0", "0", "1"}, {"-2", "1", "3"}, {"3", "-1", "-5"}});
  CHECK(*inv == expect);
  CHECK(B * *inv == RatMatrix::identity(3));
}

TEST_CASE("sparse exact rank agrees with dense RREF rank") {
  Rng rng(21);
  for (int t = 0; t < 30; ++t) {
    int r = static_cast<int>(rng.uniform(1, 12)), c = static_cast<int>(rng.uniform(1, 12));
    RatMatrix m = random_matrix(rng, r, c);
    RatMatrix copy = m;
    long dense = static_cast<long>(rref_inplace(copy).size());
    CHECK(rank_exact(m) == dense);
    CHECK(rank_float(m) == dense);
  }
}

TEST_CASE("rank of products of rank-deficient matrices") {
  Rng rng(5);
  for (int t = 0; t < 15; ++t) {
    // rank(U*V) <= min ranks; with random small factors equality is generic.
    int n = 8, k = static_cast<int>(rng.uniform(1, 5));
    RatMatrix u = random_matrix(rng, n, k), v = random_matrix(rng, k, n);
    long r = rank_exact(u * v);
    CHECK(r <= k);
    RatMatrix copy = u * v;
    CHECK(r == static_cast<long>(rref_inplace(copy).size()));
  }
}

TEST_CASE("solve and singular detection") {
  RatMatrix A(2, 2);
  A.at(0, 0) = 1;
  A.at(0, 1) = 2;
  A.at(1, 0) = 2;
  A.at(1, 1) = 4;
  CHECK_FALSE(inverse(A).has_value());

  Rng rng(9);
  for (int t = 0; t < 10; ++t) {
    RatMatrix m = random_matrix(rng, 6, 6);
    RatMatrix rhs = random_matrix(rng, 6, 2);
    auto x = solve(m, rhs);
    if (x) CHECK(m * *x == rhs);
  }
}

TEST_CASE("complement columns extend a partial basis") {
  // span(B) = x-axis; complement inside span([B A]) must add two A-columns.
  RatMatrix B(3, 1);
  B.at(0, 0) = 1;
  RatMatrix A(3, 3);
  A.at(0, 0) = 1;          // parallel to B, never chosen
  A.at(0, 1) = 1;
  A.at(1, 1) = 1;          // adds y direction
  A.at(2, 2) = 1;          // adds z direction
  auto idx = complement_columns(B, A);
  REQUIRE(idx.size() == 2);
  CHECK(idx[0] == 1);
  CHECK(idx[1] == 2);
}

TEST_CASE("nullspace columns always satisfy A x = 0") {
  Rng rng(31);
  for (int t = 0; t < 20; ++t) {
    RatMatrix m = random_matrix(rng, static_cast<int>(rng.uniform(1, 10)),
                                static_cast<int>(rng.uniform(1, 10)));
    RatMatrix ns = nullspace(m);
    if (ns.cols > 0) CHECK((m * ns).is_zero());
    RatMatrix copy = m;
    long rk = static_cast<long>(rref_inplace(copy).size());
    CHECK(rk + ns.cols == m.cols);
  }
}
