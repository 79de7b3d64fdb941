#ifndef TETFEC_TENSORCLASS_HPP
#define TETFEC_TENSORCLASS_HPP

/// Taxonomy of the value spaces carried by polynomial fields: scalars,
/// 3-vectors, and the 3x3 matrix classes (full, symmetric, traceless,
/// skew-symmetric), together with class bases and membership tests.

#include <stdexcept>
#include <string>
#include <vector>

#include "tetfec/rat.hpp"

namespace tetfec {

/// R scalar, R3 vector, M all 3x3, S symmetric, T traceless, K skew.
enum class TensorClass { R, R3, M, S, T, K };

/// Number of stored polynomial components: constrained matrix classes keep
/// all nine slots so their defining constraints hold coefficient-wise.
inline int storage_count(TensorClass c) {
  switch (c) {
    case TensorClass::R: return 1;
    case TensorClass::R3: return 3;
    default: return 9;
  }
}

/// Dimension of the class as a linear space.
inline int class_dim(TensorClass c) {
  switch (c) {
    case TensorClass::R: return 1;
    case TensorClass::R3: return 3;
    case TensorClass::M: return 9;
    case TensorClass::S: return 6;
    case TensorClass::T: return 8;
    case TensorClass::K: return 3;
  }
  throw std::invalid_argument("class_dim: bad class");
}

inline std::string class_name(TensorClass c) {
  switch (c) {
    case TensorClass::R: return "R";
    case TensorClass::R3: return "R3";
    case TensorClass::M: return "M";
    case TensorClass::S: return "S";
    case TensorClass::T: return "T";
    case TensorClass::K: return "K";
  }
  throw std::invalid_argument("class_name: bad class");
}

inline TensorClass class_from_name(const std::string& s) {
  if (s == "R") return TensorClass::R;
  if (s == "R3") return TensorClass::R3;
  if (s == "M") return TensorClass::M;
  if (s == "S") return TensorClass::S;
  if (s == "T") return TensorClass::T;
  if (s == "K") return TensorClass::K;
  throw std::invalid_argument("class_from_name: " + s);
}

inline Mat3 unit_mat(int i, int j) {
  Mat3 m{};
  m(i, j) = 1;
  return m;
}

/// Basis of the matrix class as a list of class_dim(c) matrices.
inline std::vector<Mat3> class_basis(TensorClass c) {
  std::vector<Mat3> b;
  switch (c) {
    case TensorClass::M:
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) b.push_back(unit_mat(i, j));
      break;
    case TensorClass::S:
      for (int i = 0; i < 3; ++i) b.push_back(unit_mat(i, i));
      for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) {
          Mat3 m = unit_mat(i, j);
          m(j, i) = 1;
          b.push_back(m);
        }
      break;
    case TensorClass::T:
      // Two traceless diagonals plus all six off-diagonal units.
      for (int i = 0; i < 2; ++i) {
        Mat3 m = unit_mat(i, i);
        m(2, 2) = -1;
        b.push_back(m);
      }
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
          if (i != j) b.push_back(unit_mat(i, j));
      break;
    case TensorClass::K:
      for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) {
          Mat3 m = unit_mat(i, j);
          m(j, i) = -1;
          b.push_back(m);
        }
      break;
    default:
      throw std::invalid_argument("class_basis: matrix class required");
  }
  return b;
}

inline bool matrix_in_class(TensorClass c, const Mat3& m) {
  switch (c) {
    case TensorClass::M: return true;
    case TensorClass::S:
      return m(0, 1) == m(1, 0) && m(0, 2) == m(2, 0) && m(1, 2) == m(2, 1);
    case TensorClass::T: return trace(m) == 0;
    case TensorClass::K:
      return m(0, 0) == 0 && m(1, 1) == 0 && m(2, 2) == 0 && m(0, 1) == -m(1, 0) &&
             m(0, 2) == -m(2, 0) && m(1, 2) == -m(2, 1);
    default: throw std::invalid_argument("matrix_in_class: matrix class required");
  }
}

/// mskw(w) x = w cross x.
inline Mat3 mskw(const Vec3& w) {
  Mat3 m{};
  m(0, 1) = -w[2];
  m(0, 2) = w[1];
  m(1, 0) = w[2];
  m(1, 2) = -w[0];
  m(2, 0) = -w[1];
  m(2, 1) = w[0];
  return m;
}

inline Mat3 sym(const Mat3& m) {
  Mat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r(i, j) = (m(i, j) + m(j, i)) / 2;
  return r;
}

inline Mat3 skw(const Mat3& m) {
  Mat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r(i, j) = (m(i, j) - m(j, i)) / 2;
  return r;
}

/// vskw = mskw^{-1} . skw; left inverse of mskw on all of M.
inline Vec3 vskw(const Mat3& m) {
  Mat3 k = skw(m);
  return Vec3{k(2, 1), k(0, 2), k(1, 0)};
}

inline Mat3 dev(const Mat3& m) {
  Mat3 r = m;
  Rat t = trace(m) / 3;
  for (int i = 0; i < 3; ++i) r(i, i) -= t;
  return r;
}

/// iota(v) = v I.
inline Mat3 iota(const Rat& v) {
  Mat3 r{};
  r(0, 0) = r(1, 1) = r(2, 2) = v;
  return r;
}

/// S tau = tau^T - tr(tau) I; the algebraic link between the two de Rham
/// rows of the elasticity diagram.
inline Mat3 S_op(const Mat3& m) {
  Mat3 r = transpose(m);
  Rat t = trace(m);
  for (int i = 0; i < 3; ++i) r(i, i) -= t;
  return r;
}

inline Mat3 S_inv(const Mat3& m) {
  // S^{-1} sigma = sigma^T - tr(sigma)/2 I, since tr(S tau) = -2 tr(tau).
  Mat3 r = transpose(m);
  Rat t = trace(m) / 2;
  for (int i = 0; i < 3; ++i) r(i, i) -= t;
  return r;
}

/// Orthogonal projection onto the plane with (non-unit) normal n.
inline Mat3 proj_plane(const Vec3& n) {
  Rat n2 = dot(n, n);
  if (n2 == 0) throw std::invalid_argument("proj_plane: zero normal");
  Mat3 r = Mat3::identity();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r(i, j) -= n[i] * n[j] / n2;
  return r;
}

/// Complementary projection n n^T / (n^T n).
inline Mat3 proj_normal(const Vec3& n) {
  Rat n2 = dot(n, n);
  if (n2 == 0) throw std::invalid_argument("proj_normal: zero normal");
  Mat3 r{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r(i, j) = n[i] * n[j] / n2;
  return r;
}

}  // namespace tetfec

#endif
