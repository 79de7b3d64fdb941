#ifndef TETFEC_FIELD_HPP
#define TETFEC_FIELD_HPP

/// Tensor-valued polynomial fields on a simplex and the differential and
/// algebraic operators acting on them.  Matrix operators act row-wise; the
/// surface operators on a face use its exact (non-unit) normal, so their
/// outputs carry explicit powers of |n| that cancel in every verified
/// identity and never affect spans or ranks.

#include <stdexcept>
#include <string>
#include <vector>

#include "tetfec/barypoly.hpp"
#include "tetfec/geometry.hpp"
#include "tetfec/tensorclass.hpp"

namespace tetfec {

struct BaryField {
  TensorClass cls = TensorClass::R;
  GeomPtr geom;
  std::vector<BaryPoly> comp;  // storage_count(cls) entries

  BaryField() = default;
  BaryField(TensorClass c, GeomPtr g, int deg) : cls(c), geom(std::move(g)) {
    comp.assign(storage_count(cls), BaryPoly::zero(geom->dim, deg));
  }

  int dim() const { return geom->dim; }

  int degree() const {
    int k = 0;
    for (const auto& p : comp) k = std::max(k, p.degree);
    return k;
  }

  bool is_zero() const {
    for (const auto& p : comp)
      if (!p.is_zero()) return false;
    return true;
  }

  const BaryPoly& at(int i, int j) const { return comp[static_cast<std::size_t>(3 * i + j)]; }
  BaryPoly& at(int i, int j) { return comp[static_cast<std::size_t>(3 * i + j)]; }

  BaryField operator+(const BaryField& o) const {
    check_same(o);
    BaryField r = *this;
    for (std::size_t i = 0; i < comp.size(); ++i) r.comp[i] = comp[i] + o.comp[i];
    return r;
  }

  BaryField operator-(const BaryField& o) const {
    check_same(o);
    BaryField r = *this;
    for (std::size_t i = 0; i < comp.size(); ++i) r.comp[i] = comp[i] - o.comp[i];
    return r;
  }

  BaryField operator*(const Rat& s) const {
    BaryField r = *this;
    for (auto& p : r.comp) p = p * s;
    return r;
  }

  bool equals(const BaryField& o) const {
    if (cls != o.cls || comp.size() != o.comp.size()) return false;
    for (std::size_t i = 0; i < comp.size(); ++i)
      if (!comp[i].equals(o.comp[i])) return false;
    return true;
  }

 private:
  void check_same(const BaryField& o) const {
    if (cls != o.cls || geom->dim != o.geom->dim)
      throw std::invalid_argument("field op: class or geometry mismatch");
  }
};

inline BaryField scalar_field(GeomPtr g, BaryPoly p) {
  BaryField f(TensorClass::R, std::move(g), 0);
  f.comp[0] = std::move(p);
  return f;
}

inline BaryField vector_field(GeomPtr g, BaryPoly p0, BaryPoly p1, BaryPoly p2) {
  BaryField f(TensorClass::R3, std::move(g), 0);
  f.comp = {std::move(p0), std::move(p1), std::move(p2)};
  return f;
}

inline BaryField constant_vector_field(GeomPtr g, const Vec3& v) {
  int d = g->dim;
  return vector_field(std::move(g), BaryPoly::constant(d, v[0]), BaryPoly::constant(d, v[1]),
                      BaryPoly::constant(d, v[2]));
}

/// Position x = sum_i lambda_i v_i as a degree-1 vector field.
inline BaryField position_field(GeomPtr g) {
  BaryField f(TensorClass::R3, g, 1);
  for (int j = 0; j < 3; ++j) {
    BaryPoly p = BaryPoly::zero(g->dim, 1);
    for (int i = 0; i <= g->dim; ++i) p = p + BaryPoly::lambda(g->dim, i) * g->verts[i][j];
    f.comp[j] = p;
  }
  return f;
}

inline BaryField constant_matrix_field(TensorClass c, GeomPtr g, const Mat3& m) {
  if (storage_count(c) != 9) throw std::invalid_argument("constant_matrix_field: matrix class");
  BaryField f(c, std::move(g), 0);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) f.at(i, j) = BaryPoly::constant(f.dim(), m(i, j));
  return f;
}

/// True when the stored components satisfy the class constraints.
inline bool class_constraints_hold(const BaryField& f) {
  switch (f.cls) {
    case TensorClass::R:
    case TensorClass::R3:
    case TensorClass::M: return true;
    case TensorClass::S:
      for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
          if (!f.at(i, j).equals(f.at(j, i))) return false;
      return true;
    case TensorClass::K:
      for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j)
          if (!(f.at(i, j) + f.at(j, i)).is_zero()) return false;
      return true;
    case TensorClass::T: return (f.at(0, 0) + f.at(1, 1) + f.at(2, 2)).is_zero();
  }
  return false;
}

/// Reinterpret the same components under another class tag, verifying the
/// target constraints.
inline BaryField as_class(const BaryField& f, TensorClass c) {
  if (storage_count(c) != storage_count(f.cls))
    throw std::invalid_argument("as_class: storage mismatch");
  BaryField r = f;
  r.cls = c;
  if (!class_constraints_hold(r)) throw std::invalid_argument("as_class: constraints violated");
  return r;
}

// ---------------------------------------------------------------------------
// Calculus primitives

/// Cartesian partial d/dx_j via the chain rule over barycentric variables;
/// on a face this is automatically the tangential derivative.
inline BaryPoly partial(const BaryPoly& p, int j, const SimplexGeometry& g) {
  BaryPoly r = BaryPoly::zero(p.dim, std::max(p.degree - 1, 0));
  for (int i = 0; i <= g.dim; ++i) {
    const Rat& w = g.grad_lambda[i][j];
    if (w != 0) r = r + p.dlam(i) * w;
  }
  return r;
}

/// Directional derivative along v.
inline BaryPoly dir_deriv(const BaryPoly& p, const Vec3& v, const SimplexGeometry& g) {
  BaryPoly r = BaryPoly::zero(p.dim, std::max(p.degree - 1, 0));
  for (int i = 0; i <= g.dim; ++i) {
    Rat w = dot(v, g.grad_lambda[i]);
    if (w != 0) r = r + p.dlam(i) * w;
  }
  return r;
}

inline BaryField dir_deriv(const BaryField& f, const Vec3& v) {
  BaryField r = f;
  for (auto& p : r.comp) p = dir_deriv(p, v, *f.geom);
  return r;
}

// ---------------------------------------------------------------------------
// Pointwise algebra on fields

inline BaryField mul(const BaryPoly& s, const BaryField& f) {
  BaryField r = f;
  for (auto& p : r.comp) p = s * p;
  return r;
}

/// Componentwise inner product: product, dot, or Frobenius.
inline BaryPoly frob(const BaryField& a, const BaryField& b) {
  if (a.comp.size() != b.comp.size()) throw std::invalid_argument("frob: storage mismatch");
  BaryPoly r = BaryPoly::zero(a.dim());
  for (std::size_t i = 0; i < a.comp.size(); ++i) r = r + a.comp[i] * b.comp[i];
  return r;
}

inline BaryField transpose_field(const BaryField& f) {
  BaryField r(TensorClass::M, f.geom, 0);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r.at(i, j) = f.at(j, i);
  return r;
}

inline BaryField sym_field(const BaryField& f) {
  BaryField r(TensorClass::S, f.geom, 0);
  Rat h(1, 2);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r.at(i, j) = (f.at(i, j) + f.at(j, i)) * h;
  return r;
}

inline BaryField skw_field(const BaryField& f) {
  BaryField r(TensorClass::K, f.geom, 0);
  Rat h(1, 2);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r.at(i, j) = (f.at(i, j) - f.at(j, i)) * h;
  return r;
}

inline BaryField trace_field(const BaryField& f) {
  return scalar_field(f.geom, f.at(0, 0) + f.at(1, 1) + f.at(2, 2));
}

inline BaryField dev_field(const BaryField& f) {
  BaryField r = f;
  r.cls = TensorClass::T;
  BaryPoly t = (f.at(0, 0) + f.at(1, 1) + f.at(2, 2)) * Rat(1, 3);
  for (int i = 0; i < 3; ++i) r.at(i, i) = f.at(i, i) - t;
  return r;
}

/// S tau = tau^T - tr(tau) I.
inline BaryField S_field(const BaryField& f) {
  BaryField r = transpose_field(f);
  BaryPoly t = f.at(0, 0) + f.at(1, 1) + f.at(2, 2);
  for (int i = 0; i < 3; ++i) r.at(i, i) = r.at(i, i) - t;
  return r;
}

inline BaryField S_inv_field(const BaryField& f) {
  BaryField r = transpose_field(f);
  BaryPoly t = (f.at(0, 0) + f.at(1, 1) + f.at(2, 2)) * Rat(1, 2);
  for (int i = 0; i < 3; ++i) r.at(i, i) = r.at(i, i) - t;
  return r;
}

inline BaryField mskw_field(const BaryField& v) {
  if (v.cls != TensorClass::R3) throw std::invalid_argument("mskw_field: vector required");
  BaryField r(TensorClass::K, v.geom, 0);
  r.at(0, 1) = -v.comp[2];
  r.at(1, 0) = v.comp[2];
  r.at(0, 2) = v.comp[1];
  r.at(2, 0) = -v.comp[1];
  r.at(1, 2) = -v.comp[0];
  r.at(2, 1) = v.comp[0];
  return r;
}

inline BaryField vskw_field(const BaryField& f) {
  Rat h(1, 2);
  return vector_field(f.geom, (f.at(2, 1) - f.at(1, 2)) * h, (f.at(0, 2) - f.at(2, 0)) * h,
                      (f.at(1, 0) - f.at(0, 1)) * h);
}

inline BaryField iota_field(const BaryField& s) {
  if (s.cls != TensorClass::R) throw std::invalid_argument("iota_field: scalar required");
  BaryField r(TensorClass::S, s.geom, 0);
  for (int i = 0; i < 3; ++i) r.at(i, i) = s.comp[0];
  return r;
}

/// Constant matrix times matrix field.
inline BaryField left_mul(const Mat3& a, const BaryField& f) {
  BaryField r(TensorClass::M, f.geom, 0);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      BaryPoly acc = BaryPoly::zero(f.dim());
      for (int k = 0; k < 3; ++k)
        if (a(i, k) != 0) acc = acc + f.at(k, j) * a(i, k);
      r.at(i, j) = acc;
    }
  return r;
}

/// Matrix field times constant matrix.
inline BaryField right_mul(const BaryField& f, const Mat3& a) {
  BaryField r(TensorClass::M, f.geom, 0);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      BaryPoly acc = BaryPoly::zero(f.dim());
      for (int k = 0; k < 3; ++k)
        if (a(k, j) != 0) acc = acc + f.at(i, k) * a(k, j);
      r.at(i, j) = acc;
    }
  return r;
}

/// Matrix field times constant vector: (tau n)_i = sum_j tau_ij n_j.
inline BaryField matvec(const BaryField& f, const Vec3& n) {
  BaryField r(TensorClass::R3, f.geom, 0);
  for (int i = 0; i < 3; ++i) {
    BaryPoly acc = BaryPoly::zero(f.dim());
    for (int j = 0; j < 3; ++j)
      if (n[j] != 0) acc = acc + f.at(i, j) * n[j];
    r.comp[static_cast<std::size_t>(i)] = acc;
  }
  return r;
}

/// Constant row vector times matrix field: (n^T tau)_j = sum_i n_i tau_ij.
inline BaryField vecmat(const Vec3& n, const BaryField& f) {
  BaryField r(TensorClass::R3, f.geom, 0);
  for (int j = 0; j < 3; ++j) {
    BaryPoly acc = BaryPoly::zero(f.dim());
    for (int i = 0; i < 3; ++i)
      if (n[i] != 0) acc = acc + f.at(i, j) * n[i];
    r.comp[static_cast<std::size_t>(j)] = acc;
  }
  return r;
}

/// Constant matrix times vector field.
inline BaryField mat_apply(const Mat3& a, const BaryField& v) {
  if (v.cls != TensorClass::R3) throw std::invalid_argument("mat_apply: vector required");
  BaryField r(TensorClass::R3, v.geom, 0);
  for (int i = 0; i < 3; ++i) {
    BaryPoly acc = BaryPoly::zero(v.dim());
    for (int j = 0; j < 3; ++j)
      if (a(i, j) != 0) acc = acc + v.comp[static_cast<std::size_t>(j)] * a(i, j);
    r.comp[static_cast<std::size_t>(i)] = acc;
  }
  return r;
}

inline BaryField dot_const(const BaryField& v, const Vec3& n) {
  if (v.cls != TensorClass::R3) throw std::invalid_argument("dot_const: vector required");
  BaryPoly acc = BaryPoly::zero(v.dim());
  for (int i = 0; i < 3; ++i)
    if (n[i] != 0) acc = acc + v.comp[static_cast<std::size_t>(i)] * n[i];
  return scalar_field(v.geom, acc);
}

/// v x n for a vector field and constant n (= -mskw(n) v).
inline BaryField cross_const(const BaryField& v, const Vec3& n) {
  return mat_apply(-mskw(n), v);
}

/// tau x n with rows tau_i x n (= tau mskw(n)).
inline BaryField cross_right(const BaryField& f, const Vec3& n) {
  return right_mul(f, mskw(n));
}

/// n x tau acting on rows: rows n x tau_i (= -tau mskw(n)); this is the
/// matrix obtained by substituting n for nabla in the row-wise curl.
inline BaryField cross_left_rows(const Vec3& n, const BaryField& f) {
  return right_mul(f, -mskw(n));
}

// ---------------------------------------------------------------------------
// Differential operators

namespace detail {

inline void need_dim(const BaryField& f, int d, const std::string& name) {
  if (f.dim() != d)
    throw std::invalid_argument("apply_diffop " + name + ": needs simplex dim " +
                                std::to_string(d));
}

inline bool is_matrix_class(TensorClass c) { return storage_count(c) == 9; }

inline BaryField grad_vector(const BaryField& v, TensorClass out) {
  BaryField r(out, v.geom, 0);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r.at(i, j) = partial(v.comp[static_cast<std::size_t>(i)], j, *v.geom);
  return r;
}

inline BaryField curl_vector(const BaryField& v) {
  const SimplexGeometry& g = *v.geom;
  auto d = [&](int a, int b) { return partial(v.comp[static_cast<std::size_t>(b)], a, g); };
  return vector_field(v.geom, d(1, 2) - d(2, 1), d(2, 0) - d(0, 2), d(0, 1) - d(1, 0));
}

inline BaryField div_matrix(const BaryField& f) {
  BaryField r(TensorClass::R3, f.geom, 0);
  for (int i = 0; i < 3; ++i) {
    BaryPoly acc = BaryPoly::zero(f.dim());
    for (int j = 0; j < 3; ++j) acc = acc + partial(f.at(i, j), j, *f.geom);
    r.comp[static_cast<std::size_t>(i)] = acc;
  }
  return r;
}

inline BaryField curl_matrix(const BaryField& f) {
  BaryField r(TensorClass::M, f.geom, 0);
  const SimplexGeometry& g = *f.geom;
  for (int i = 0; i < 3; ++i) {
    // Row i of the result is curl of row i of f.
    r.at(i, 0) = partial(f.at(i, 2), 1, g) - partial(f.at(i, 1), 2, g);
    r.at(i, 1) = partial(f.at(i, 0), 2, g) - partial(f.at(i, 2), 0, g);
    r.at(i, 2) = partial(f.at(i, 1), 0, g) - partial(f.at(i, 0), 1, g);
  }
  return r;
}

inline BaryField div_vector(const BaryField& v) {
  BaryPoly acc = BaryPoly::zero(v.dim());
  for (int j = 0; j < 3; ++j) acc = acc + partial(v.comp[static_cast<std::size_t>(j)], j, *v.geom);
  return scalar_field(v.geom, acc);
}

}  // namespace detail

/// Differential operators by name.  3-space operators need a tetrahedron
/// geometry; the *_f operators need a face geometry (which supplies n).
inline BaryField apply_diffop(const std::string& name, const BaryField& f) {
  using detail::is_matrix_class;
  const TensorClass c = f.cls;

  if (name == "grad" || name == "hess" || name == "def" || name == "devgrad" || name == "curl" ||
      name == "div" || name == "inc" || name == "symcurl" || name == "divdiv")
    detail::need_dim(f, 3, name);
  else if (name == "grad_f" || name == "curl_f" || name == "div_f" || name == "rot_f" ||
           name == "hess_f" || name == "symcurl_f" || name == "div_f_div_f")
    detail::need_dim(f, 2, name);
  else
    throw std::invalid_argument("apply_diffop: unknown operator " + name);

  if (name == "grad") {
    if (c == TensorClass::R)
      return vector_field(f.geom, partial(f.comp[0], 0, *f.geom), partial(f.comp[0], 1, *f.geom),
                          partial(f.comp[0], 2, *f.geom));
    if (c == TensorClass::R3) return detail::grad_vector(f, TensorClass::M);
    throw std::invalid_argument("grad: scalar or vector input");
  }
  if (name == "hess") {
    if (c != TensorClass::R) throw std::invalid_argument("hess: scalar input");
    return as_class(detail::grad_vector(apply_diffop("grad", f), TensorClass::M), TensorClass::S);
  }
  if (name == "def") {
    if (c != TensorClass::R3) throw std::invalid_argument("def: vector input");
    return sym_field(detail::grad_vector(f, TensorClass::M));
  }
  if (name == "devgrad") {
    if (c != TensorClass::R3) throw std::invalid_argument("devgrad: vector input");
    return dev_field(detail::grad_vector(f, TensorClass::M));
  }
  if (name == "curl") {
    if (c == TensorClass::R3) return detail::curl_vector(f);
    if (is_matrix_class(c)) return detail::curl_matrix(f);
    throw std::invalid_argument("curl: vector or matrix input");
  }
  if (name == "div") {
    if (c == TensorClass::R3) return detail::div_vector(f);
    if (is_matrix_class(c)) return detail::div_matrix(f);
    throw std::invalid_argument("div: vector or matrix input");
  }
  if (name == "inc") {
    if (c != TensorClass::S) throw std::invalid_argument("inc: symmetric input");
    BaryField ct = transpose_field(detail::curl_matrix(f));
    return as_class(detail::curl_matrix(ct) * Rat(-1), TensorClass::S);
  }
  if (name == "symcurl") {
    if (!(c == TensorClass::T || c == TensorClass::M))
      throw std::invalid_argument("symcurl: traceless input");
    return sym_field(detail::curl_matrix(f));
  }
  if (name == "divdiv") {
    if (!(c == TensorClass::S || c == TensorClass::M))
      throw std::invalid_argument("divdiv: symmetric input");
    return detail::div_vector(detail::div_matrix(f));
  }

  // Surface operators; n is the exact non-unit face normal.
  const Vec3 n = f.geom->normal();
  if (name == "grad_f") {
    if (c == TensorClass::R)
      return vector_field(f.geom, partial(f.comp[0], 0, *f.geom), partial(f.comp[0], 1, *f.geom),
                          partial(f.comp[0], 2, *f.geom));
    if (c == TensorClass::R3) return detail::grad_vector(f, TensorClass::M);
    throw std::invalid_argument("grad_f: scalar or vector input");
  }
  if (name == "curl_f") {
    // curl_f v = n x grad_f v; row-wise for vectors.
    if (c == TensorClass::R) return mat_apply(mskw(n), apply_diffop("grad_f", f));
    if (c == TensorClass::R3) return right_mul(detail::grad_vector(f, TensorClass::M), transpose(mskw(n)));
    throw std::invalid_argument("curl_f: scalar or vector input");
  }
  if (name == "div_f") {
    if (c == TensorClass::R3) return detail::div_vector(f);
    if (is_matrix_class(c)) return detail::div_matrix(f);
    throw std::invalid_argument("div_f: vector or matrix input");
  }
  if (name == "rot_f") {
    // rot_f v = n . (nabla x v) = div_f(v x n).
    if (c == TensorClass::R3) return detail::div_vector(cross_const(f, n));
    if (is_matrix_class(c)) return detail::div_matrix(cross_right(f, n));
    throw std::invalid_argument("rot_f: vector or matrix input");
  }
  if (name == "hess_f") {
    if (c != TensorClass::R) throw std::invalid_argument("hess_f: scalar input");
    return as_class(detail::grad_vector(apply_diffop("grad_f", f), TensorClass::M),
                    TensorClass::S);
  }
  if (name == "symcurl_f") {
    if (c != TensorClass::R3) throw std::invalid_argument("symcurl_f: vector input");
    return sym_field(apply_diffop("curl_f", f));
  }
  // div_f_div_f
  if (!is_matrix_class(c)) throw std::invalid_argument("div_f_div_f: matrix input");
  return detail::div_vector(detail::div_matrix(f));
}

// ---------------------------------------------------------------------------
// Restriction and integration

/// Restriction of a field to a sub-simplex of its host: components restrict
/// pointwise, the geometry becomes the sub-simplex's own.
inline BaryField restrict_field(const BaryField& f, const std::vector<int>& host_vars) {
  BaryField r = f;
  r.geom = std::make_shared<const SimplexGeometry>(f.geom->sub(host_vars));
  for (auto& p : r.comp) p = p.restricted(host_vars);
  return r;
}

/// Integral over the field's own simplex with measure normalized to 1.
inline Rat integrate_normalized(const BaryField& f) {
  if (f.cls != TensorClass::R) throw std::invalid_argument("integrate: scalar field required");
  return f.comp[0].integral_normalized();
}

/// Euclidean integral over the sub-simplex spanned by the given vertex
/// indices of the field's host simplex (all indices = the host itself; a
/// single index = point evaluation).  Throws when the sub-simplex measure is
/// irrational, since the result could not be represented exactly.
inline Rat integrate_subsimplex(const BaryField& f, const std::vector<int>& sub) {
  if (f.cls != TensorClass::R) throw std::invalid_argument("integrate: scalar field required");
  for (std::size_t i = 0; i < sub.size(); ++i) {
    if (sub[i] < 0 || sub[i] > f.dim())
      throw std::invalid_argument("integrate_subsimplex: not a face of the host simplex");
    if (i > 0 && sub[i] <= sub[i - 1])
      throw std::invalid_argument("integrate_subsimplex: indices must increase");
  }
  if (sub.empty()) throw std::invalid_argument("integrate_subsimplex: empty sub-simplex");
  if (sub.size() == 1) {
    std::vector<Rat> pt(static_cast<std::size_t>(f.dim()) + 1, Rat(0));
    pt[static_cast<std::size_t>(sub[0])] = 1;
    return f.comp[0].eval(pt);
  }
  BaryPoly p = f.comp[0].restricted(sub);
  SimplexGeometry g = f.geom->sub(sub);
  auto m = g.euclidean_measure();
  if (!m) throw std::domain_error("integrate_subsimplex: irrational sub-simplex measure");
  return p.integral_normalized() * *m;
}

}  // namespace tetfec

#endif
