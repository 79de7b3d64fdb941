#ifndef TETFEC_RAT_HPP
#define TETFEC_RAT_HPP

/// Exact rational scalars and small fixed-size rational vectors/matrices.
/// Every quantity in the engine lives in Q; nothing here ever rounds.

#include <boost/multiprecision/gmp.hpp>

#include <array>
#include <optional>
#include <stdexcept>
#include <string>

namespace tetfec {

using Int = boost::multiprecision::mpz_int;
/// Invariant: canonical form (lowest terms, positive denominator). All
/// construction must go through make_rat/parse_rat or arithmetic on canonical
/// values; raw string construction of the backend does not canonicalize.
using Rat = boost::multiprecision::mpq_rational;

/// Build a canonical rational from an integer pair; the only safe way to form
/// p/q with arbitrary signs (the backend pair constructor mishandles q < 0).
inline Rat make_rat(const Int& num, const Int& den) {
  if (den == 0) throw std::invalid_argument("make_rat: zero denominator");
  Rat r(num);
  r /= Rat(den);
  return r;
}

inline Rat make_rat(long num, long den = 1) { return make_rat(Int(num), Int(den)); }

/// Parse "p", "-p" or "p/q" with optional surrounding whitespace.
inline Rat parse_rat(const std::string& text) {
  auto first = text.find_first_not_of(" \t");
  auto last = text.find_last_not_of(" \t");
  if (first == std::string::npos) throw std::invalid_argument("parse_rat: empty literal");
  std::string body = text.substr(first, last - first + 1);
  auto slash = body.find('/');
  try {
    if (slash == std::string::npos) return Rat(Int(body));
    return make_rat(Int(body.substr(0, slash)), Int(body.substr(slash + 1)));
  } catch (const std::exception&) {
    throw std::invalid_argument("parse_rat: bad rational literal '" + body + "'");
  }
}

inline std::string rat_str(const Rat& r) { return r.str(); }

/// Exact square root if the argument is a perfect square of a rational.
inline std::optional<Rat> exact_sqrt(const Rat& r) {
  if (r < 0) return std::nullopt;
  Int num = numerator(r), den = denominator(r);
  Int sn = sqrt(num), sd = sqrt(den);
  if (sn * sn != num || sd * sd != den) return std::nullopt;
  return make_rat(sn, sd);
}

// ---------------------------------------------------------------------------
// Rational 3-vectors and 3x3 matrices (row-major).

struct Vec3 {
  std::array<Rat, 3> a{Rat(0), Rat(0), Rat(0)};

  Vec3() = default;
  Vec3(Rat x, Rat y, Rat z) : a{std::move(x), std::move(y), std::move(z)} {}

  Rat& operator[](int i) { return a[i]; }
  const Rat& operator[](int i) const { return a[i]; }
  bool operator==(const Vec3&) const = default;

  Vec3 operator+(const Vec3& o) const { return {a[0] + o[0], a[1] + o[1], a[2] + o[2]}; }
  Vec3 operator-(const Vec3& o) const { return {a[0] - o[0], a[1] - o[1], a[2] - o[2]}; }
  Vec3 operator-() const { return {-a[0], -a[1], -a[2]}; }
  Vec3 operator*(const Rat& s) const { return {a[0] * s, a[1] * s, a[2] * s}; }
  bool is_zero() const { return a[0] == 0 && a[1] == 0 && a[2] == 0; }
};

inline Rat dot(const Vec3& u, const Vec3& v) { return u[0] * v[0] + u[1] * v[1] + u[2] * v[2]; }

inline Vec3 cross(const Vec3& u, const Vec3& v) {
  return {u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]};
}

struct Mat3 {
  std::array<Rat, 9> m{};

  Mat3() { m.fill(Rat(0)); }
  static Mat3 identity() {
    Mat3 r;
    r(0, 0) = 1; r(1, 1) = 1; r(2, 2) = 1;
    return r;
  }

  Rat& operator()(int i, int j) { return m[3 * i + j]; }
  const Rat& operator()(int i, int j) const { return m[3 * i + j]; }
  bool operator==(const Mat3&) const = default;

  Mat3 operator+(const Mat3& o) const {
    Mat3 r;
    for (int i = 0; i < 9; ++i) r.m[i] = m[i] + o.m[i];
    return r;
  }
  Mat3 operator-(const Mat3& o) const {
    Mat3 r;
    for (int i = 0; i < 9; ++i) r.m[i] = m[i] - o.m[i];
    return r;
  }
  Mat3 operator-() const {
    Mat3 r;
    for (int i = 0; i < 9; ++i) r.m[i] = -m[i];
    return r;
  }
  Mat3 operator*(const Rat& s) const {
    Mat3 r;
    for (int i = 0; i < 9; ++i) r.m[i] = m[i] * s;
    return r;
  }
  Mat3 operator*(const Mat3& o) const {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int k = 0; k < 3; ++k)
        for (int j = 0; j < 3; ++j) r(i, j) += (*this)(i, k) * o(k, j);
    return r;
  }
  Vec3 operator*(const Vec3& v) const {
    Vec3 r;
    for (int i = 0; i < 3; ++i) r[i] = (*this)(i, 0) * v[0] + (*this)(i, 1) * v[1] + (*this)(i, 2) * v[2];
    return r;
  }
  bool is_zero() const {
    for (const auto& e : m)
      if (e != 0) return false;
    return true;
  }
};

inline Mat3 transpose(const Mat3& a) {
  Mat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r(i, j) = a(j, i);
  return r;
}

inline Rat trace(const Mat3& a) { return a(0, 0) + a(1, 1) + a(2, 2); }

inline Mat3 outer(const Vec3& u, const Vec3& v) {
  Mat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r(i, j) = u[i] * v[j];
  return r;
}

inline Rat det3(const Mat3& a) {
  return a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) -
         a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0)) +
         a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));
}

}  // namespace tetfec

#endif
