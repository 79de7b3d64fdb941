#include <catch2/catch_amalgamated.hpp>

#include "tetfec/random.hpp"
#include "tetfec/rat.hpp"

using namespace tetfec;

TEST_CASE("rationals are canonical") {
  CHECK(make_rat(22, 77) == make_rat(2, 7));
  CHECK(numerator(make_rat(22, 77)) == 2);
  CHECK(denominator(make_rat(22, 77)) == 7);

  // Negative denominators normalize to a positive one.
  Rat r = make_rat(3, -6);
  CHECK(numerator(r) == -1);
  CHECK(denominator(r) == 2);

  CHECK(denominator(make_rat(0, -5)) == 1);
  CHECK_THROWS_AS(make_rat(1, 0), std::invalid_argument);
}

TEST_CASE("parse and print round-trip") {
  CHECK(parse_rat("2/4") == make_rat(1, 2));
  CHECK(parse_rat("-6/4") == make_rat(-3, 2));
  CHECK(parse_rat(" 7 ") == Rat(7));
  CHECK(parse_rat("-12") == Rat(-12));
  CHECK(rat_str(make_rat(-3, 2)) == "-3/2");
  CHECK(rat_str(Rat(5)) == "5");
  CHECK_THROWS_AS(parse_rat("a/b"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rat(""), std::invalid_argument);

  Rng rng(11);
  for (int i = 0; i < 200; ++i) {
    Rat q = rng.rat(1000, 999);
    CHECK(parse_rat(rat_str(q)) == q);
  }
}

TEST_CASE("arithmetic stays canonical") {
  Rng rng(7);
  for (int i = 0; i < 200; ++i) {
    Rat a = rng.rat(50, 20), b = rng.nonzero_rat(50, 20);
    Rat s = a + b, p = a * b, q = a / b;
    for (const Rat& v : {s, p, q}) {
      CHECK(denominator(v) > 0);
      CHECK(gcd(Int(abs(numerator(v))), Int(denominator(v))) == (numerator(v) == 0 ? denominator(v) : 1));
    }
  }
}

TEST_CASE("exact square roots") {
  CHECK(exact_sqrt(make_rat(9, 4)) == make_rat(3, 2));
  CHECK(exact_sqrt(Rat(0)) == Rat(0));
  CHECK(exact_sqrt(Rat(1)) == Rat(1));
  CHECK_FALSE(exact_sqrt(Rat(2)).has_value());
  CHECK_FALSE(exact_sqrt(make_rat(1, 3)).has_value());
  CHECK_FALSE(exact_sqrt(Rat(-4)).has_value());
}

TEST_CASE("vector and matrix primitives") {
  Vec3 u(Rat(1), Rat(0), Rat(0)), v(Rat(0), Rat(1), Rat(0));
  CHECK(cross(u, v) == Vec3(Rat(0), Rat(0), Rat(1)));
  CHECK(dot(u, v) == 0);

  Rng rng(3);
  for (int i = 0; i < 50; ++i) {
    Vec3 a = rng.vec3(), b = rng.vec3();
    CHECK(dot(cross(a, b), a) == 0);
    CHECK(dot(cross(a, b), b) == 0);
    Mat3 m = rng.mat3(), n = rng.mat3();
    CHECK(transpose(transpose(m)) == m);
    CHECK(transpose(m * n) == transpose(n) * transpose(m));
    CHECK(trace(m * n) == trace(n * m));
    CHECK((outer(a, b) * rng.vec3()).a.size() == 3u);
    CHECK(det3(m * n) == det3(m) * det3(n));
  }
  CHECK(det3(Mat3::identity()) == 1);
}
