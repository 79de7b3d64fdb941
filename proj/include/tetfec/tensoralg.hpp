#ifndef TETFEC_TENSORALG_HPP
#define TETFEC_TENSORALG_HPP

/// Tangential/normal decompositions of matrix classes on edges and faces,
/// canonical small kernel spaces (RT, RM, P1, ...), a string-keyed dispatcher
/// for the pointwise tensor operators, and randomized symbolic checks of the
/// algebraic identities that connect the differential complexes.
///
/// Frames are rational and orthogonal but NOT normalized (unit vectors are
/// usually irrational).  Individual basis matrices therefore carry frame
/// scale factors; every consumer depends only on the spans, which are
/// scale-invariant.  Trace-free combinations divide by the squared lengths
/// so that the traceless class constraint holds exactly.

#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "tetfec/field.hpp"
#include "tetfec/geometry.hpp"
#include "tetfec/linalg.hpp"
#include "tetfec/random.hpp"
#include "tetfec/tensorclass.hpp"

namespace tetfec {

// ---------------------------------------------------------------------------
// Frames
// ---------------------------------------------------------------------------

/// Edge frame {n1, n2, t}: t spans the edge, n1 and n2 span its normal plane.
/// n1, n2 must be orthogonal to t but need not be orthogonal to each other
/// (the two incident-face normals are an admissible choice).
struct EdgeFrame {
  Vec3 t, n1, n2;
};

/// Face frame {t1, t2, n}: t1, t2 span the face, n is the face normal.
/// All three are mutually orthogonal.
struct FaceFrame {
  Vec3 t1, t2, n;
};

inline void check_edge_frame(const EdgeFrame& fr) {
  if (fr.t.is_zero() || fr.n1.is_zero() || fr.n2.is_zero())
    throw std::invalid_argument("edge frame: zero vector");
  if (dot(fr.t, fr.n1) != 0 || dot(fr.t, fr.n2) != 0)
    throw std::invalid_argument("edge frame: normals not orthogonal to tangent");
  if (cross(fr.n1, fr.n2).is_zero())
    throw std::invalid_argument("edge frame: normals not independent");
}

inline void check_face_frame(const FaceFrame& fr) {
  if (fr.t1.is_zero() || fr.t2.is_zero() || fr.n.is_zero())
    throw std::invalid_argument("face frame: zero vector");
  if (dot(fr.t1, fr.t2) != 0 || dot(fr.t1, fr.n) != 0 || dot(fr.t2, fr.n) != 0)
    throw std::invalid_argument("face frame: not mutually orthogonal");
}

// ---------------------------------------------------------------------------
// Tangential/normal bases
// ---------------------------------------------------------------------------

enum class SubKind { edge, face };
enum class TnVariant { div, curl };

/// Direct-sum split of a matrix class on a sub-simplex.  The normal part is
/// what a conforming trace controls across the sub-simplex; the tangential
/// part merges into the local bubble space.
struct TnBasis {
  TensorClass cls = TensorClass::S;
  SubKind kind = SubKind::edge;
  TnVariant variant = TnVariant::div;
  std::vector<Mat3> normal_part;
  std::vector<Mat3> tangential_part;
};

inline Mat3 sym_outer(const Vec3& a, const Vec3& b) { return sym(outer(a, b)); }

/// a (x) a / (a.a) - b (x) b / (b.b): exactly traceless for any lengths.
inline Mat3 traceless_diff(const Vec3& a, const Vec3& b) {
  return outer(a, a) * (Rat(1) / dot(a, a)) - outer(b, b) * (Rat(1) / dot(b, b));
}

inline TnBasis tn_basis(TensorClass cls, SubKind kind, TnVariant variant, const EdgeFrame& fr) {
  if (kind != SubKind::edge) throw std::invalid_argument("tn_basis: edge frame needs kind=edge");
  if (variant != TnVariant::div)
    throw std::invalid_argument("tn_basis: only the div split is defined on edges");
  check_edge_frame(fr);
  TnBasis b{cls, kind, variant, {}, {}};
  const Vec3 &t = fr.t, &n1 = fr.n1, &n2 = fr.n2;
  if (cls == TensorClass::S) {
    b.tangential_part = {outer(t, t)};
    b.normal_part = {sym_outer(t, n1), sym_outer(t, n2), sym_outer(n1, n1), sym_outer(n1, n2),
                     sym_outer(n2, n2)};
  } else if (cls == TensorClass::T) {
    b.tangential_part = {outer(n1, t), outer(n2, t)};
    b.normal_part = {outer(t, n1), outer(t, n2)};
    const Vec3 ns[2] = {n1, n2};
    for (const Vec3& ni : ns)
      for (const Vec3& nj : ns)
        b.normal_part.push_back(outer(ni, nj) - outer(t, t) * (dot(ni, nj) / dot(t, t)));
  } else {
    throw std::invalid_argument("tn_basis: class must be S or T");
  }
  for (const Mat3& m : b.normal_part)
    if (!matrix_in_class(cls, m)) throw std::logic_error("tn_basis: normal part leaves class");
  for (const Mat3& m : b.tangential_part)
    if (!matrix_in_class(cls, m)) throw std::logic_error("tn_basis: tangential part leaves class");
  return b;
}

inline TnBasis tn_basis(TensorClass cls, SubKind kind, TnVariant variant, const FaceFrame& fr) {
  if (kind != SubKind::face) throw std::invalid_argument("tn_basis: face frame needs kind=face");
  check_face_frame(fr);
  TnBasis b{cls, kind, variant, {}, {}};
  const Vec3 &t1 = fr.t1, &t2 = fr.t2, &n = fr.n;
  if (cls == TensorClass::S && variant == TnVariant::div) {
    b.tangential_part = {sym_outer(t1, t1), sym_outer(t1, t2), sym_outer(t2, t2)};
    b.normal_part = {outer(n, n), sym_outer(t1, n), sym_outer(t2, n)};
  } else if (cls == TensorClass::S && variant == TnVariant::curl) {
    // For tangential (cross-product) traces the roles swap: only n (x) n is
    // invisible to the trace and merges into the bubble space.
    b.tangential_part = {sym_outer(t1, t1), sym_outer(t1, t2), sym_outer(t2, t2),
                         sym_outer(t1, n), sym_outer(t2, n)};
    b.normal_part = {outer(n, n)};
  } else if (cls == TensorClass::T && variant == TnVariant::div) {
    b.tangential_part = {outer(n, t1), outer(n, t2), outer(t2, t1), outer(t1, t2),
                         traceless_diff(t2, t1)};
    b.normal_part = {traceless_diff(n, t1), outer(t1, n), outer(t2, n)};
  } else {
    throw std::invalid_argument("tn_basis: unsupported class/variant on a face");
  }
  for (const Mat3& m : b.normal_part)
    if (!matrix_in_class(cls, m)) throw std::logic_error("tn_basis: normal part leaves class");
  for (const Mat3& m : b.tangential_part)
    if (!matrix_in_class(cls, m)) throw std::logic_error("tn_basis: tangential part leaves class");
  return b;
}

/// Symmetric tangential-tangential plane S(f) = span{sym(t_i (x) t_j)}.
inline std::vector<Mat3> s_face_plane(const FaceFrame& fr) {
  return tn_basis(TensorClass::S, SubKind::face, TnVariant::div, fr).tangential_part;
}

/// Rank of the stacked (normal + tangential) matrices, vectorized.  Equals
/// dim(class) exactly when the two parts form a direct sum of the class.
inline int tn_total_rank(const TnBasis& b) {
  RatMatrix m(static_cast<int>(b.normal_part.size() + b.tangential_part.size()), 9);
  int r = 0;
  for (const auto* part : {&b.normal_part, &b.tangential_part})
    for (const Mat3& mat : *part) {
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m.at(r, 3 * i + j) = mat(i, j);
      ++r;
    }
  return rank_exact(m);
}

// ---------------------------------------------------------------------------
// Canonical kernel spaces
// ---------------------------------------------------------------------------

/// Small polynomial spaces that appear as kernels/cokernels of the complexes:
///   R    constants                          dim 1
///   P1   scalar linears                     dim geom.dim + 1  (4 on a tet)
///   RM   rigid motions  {a + b x x}         dim 6  (tet)
///   RT   Raviart-Thomas {a x + b}           dim 4  (tet)
///   RT_f face Raviart-Thomas, tangential    dim 3  (face)
///   RM_f face rigid motions, tangential     dim 3  (face)
struct KernelSpace {
  std::string id;
  std::vector<BaryField> basis;
};

inline KernelSpace kernel_space(const std::string& id, GeomPtr g) {
  KernelSpace ks{id, {}};
  const int d = g->dim;
  const Vec3 e[3] = {Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{0, 0, 1}};
  if (id == "R") {
    ks.basis.push_back(scalar_field(g, BaryPoly::constant(d, 1)));
  } else if (id == "P1") {
    for (int i = 0; i <= d; ++i) ks.basis.push_back(scalar_field(g, BaryPoly::lambda(d, i)));
  } else if (id == "RM") {
    if (d != 3) throw std::invalid_argument("kernel_space: RM lives on a tetrahedron");
    BaryField x = position_field(g);
    for (int i = 0; i < 3; ++i) ks.basis.push_back(constant_vector_field(g, e[i]));
    for (int i = 0; i < 3; ++i) ks.basis.push_back(mat_apply(mskw(e[i]), x));
  } else if (id == "RT") {
    if (d != 3) throw std::invalid_argument("kernel_space: RT lives on a tetrahedron");
    for (int i = 0; i < 3; ++i) ks.basis.push_back(constant_vector_field(g, e[i]));
    ks.basis.push_back(position_field(g));
  } else if (id == "RT_f") {
    if (d != 2) throw std::invalid_argument("kernel_space: RT_f lives on a face");
    Vec3 n = g->normal();
    Vec3 tans[2] = {g->verts[1] - g->verts[0], cross(n, g->verts[1] - g->verts[0])};
    for (const Vec3& t : tans) ks.basis.push_back(constant_vector_field(g, t));
    ks.basis.push_back(mat_apply(proj_plane(n), position_field(g)));
  } else if (id == "RM_f") {
    if (d != 2) throw std::invalid_argument("kernel_space: RM_f lives on a face");
    Vec3 n = g->normal();
    Vec3 tans[2] = {g->verts[1] - g->verts[0], cross(n, g->verts[1] - g->verts[0])};
    for (const Vec3& t : tans) ks.basis.push_back(constant_vector_field(g, t));
    ks.basis.push_back(mat_apply(mskw(n), position_field(g)));
  } else {
    throw std::invalid_argument("kernel_space: unknown id " + id);
  }
  return ks;
}

// ---------------------------------------------------------------------------
// Pointwise operator dispatch
// ---------------------------------------------------------------------------

using TensorValue = std::variant<Rat, Vec3, Mat3>;

inline TensorValue tensor_op(const std::string& name, const TensorValue& v) {
  if (name == "mskw") {
    if (!std::holds_alternative<Vec3>(v)) throw std::invalid_argument("mskw expects a vector");
    return mskw(std::get<Vec3>(v));
  }
  const Mat3* m = std::get_if<Mat3>(&v);
  if (name == "iota") {
    if (const Rat* s = std::get_if<Rat>(&v)) return iota(*s);
    throw std::invalid_argument("iota expects a scalar");
  }
  if (!m) throw std::invalid_argument("tensor_op '" + name + "' expects a matrix");
  if (name == "vskw") return vskw(*m);
  if (name == "skw") return skw(*m);
  if (name == "sym") return sym(*m);
  if (name == "tr") return trace(*m);
  if (name == "dev") return dev(*m);
  if (name == "S") return S_op(*m);
  throw std::invalid_argument("tensor_op: unknown operator " + name);
}

/// Projectors need the face normal as a second argument.
inline Mat3 tensor_op_proj(const std::string& name, const Vec3& n) {
  if (name == "proj_PiF") return proj_plane(n);
  if (name == "proj_PiF_perp") return mskw(n) * proj_plane(n);
  throw std::invalid_argument("tensor_op_proj: unknown operator " + name);
}

// ---------------------------------------------------------------------------
// Randomized identity checks
// ---------------------------------------------------------------------------

inline BaryPoly random_bary_poly(Rng& rng, int dim, int deg) {
  BaryPoly p = BaryPoly::zero(dim, deg);
  for (auto& c : p.c)
    if (rng.uniform(0, 3) != 0) c = rng.rat(6, 3);
  return p;
}

/// Random field in the class with constraints built in exactly.
inline BaryField random_class_field(Rng& rng, TensorClass cls, GeomPtr g, int deg) {
  BaryField f(cls, g, deg);
  const int d = g->dim;
  switch (cls) {
    case TensorClass::R:
      f.comp[0] = random_bary_poly(rng, d, deg);
      break;
    case TensorClass::R3:
      for (int i = 0; i < 3; ++i) f.comp[i] = random_bary_poly(rng, d, deg);
      break;
    case TensorClass::M:
      for (auto& c : f.comp) c = random_bary_poly(rng, d, deg);
      break;
    case TensorClass::S:
      for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j) {
          f.at(i, j) = random_bary_poly(rng, d, deg);
          if (j > i) f.at(j, i) = f.at(i, j);
        }
      break;
    case TensorClass::K: {
      for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) {
          f.at(i, j) = random_bary_poly(rng, d, deg);
          f.at(j, i) = f.at(i, j) * Rat(-1);
        }
      break;
    }
    case TensorClass::T: {
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
          if (i != j) f.at(i, j) = random_bary_poly(rng, d, deg);
      f.at(0, 0) = random_bary_poly(rng, d, deg);
      f.at(1, 1) = random_bary_poly(rng, d, deg);
      f.at(2, 2) = (f.at(0, 0) + f.at(1, 1)) * Rat(-1);
      break;
    }
  }
  if (!class_constraints_hold(f)) throw std::logic_error("random_class_field: constraints");
  return f;
}

struct IdentityReport {
  std::string identity;
  bool pass = true;
  int trials = 0;
  std::string witness;  // description of the first failing trial, empty when pass
};

/// Check one named identity on `trials` random inputs of degree <= max_degree.
/// Field identities run on the reference tetrahedron; pointwise identities use
/// random rational matrices and vectors.
inline IdentityReport verify_algebraic_identity(const std::string& id, unsigned seed = 20240817,
                                                int trials = 20, int max_degree = 4) {
  IdentityReport rep{id, true, 0, ""};
  Rng rng(seed);
  GeomPtr g = ref_tet_geometry();

  auto fail = [&](int trial, const std::string& what) {
    rep.pass = false;
    rep.witness = "trial " + std::to_string(trial) + ": " + what;
  };

  for (int trial = 0; trial < trials && rep.pass; ++trial) {
    ++rep.trials;
    int deg = 1 + static_cast<int>(rng.uniform(0, max_degree - 1));
    if (id == "divS_eq_2vskw_curl") {
      BaryField tau = random_class_field(rng, TensorClass::M, g, deg);
      BaryField res = apply_diffop("div", S_field(tau)) -
                      vskw_field(apply_diffop("curl", tau)) * Rat(2);
      if (!res.is_zero()) fail(trial, "div(S tau) - 2 vskw(curl tau) != 0");
    } else if (id == "vskw_n_trace") {
      Mat3 tau = rng.mat3();
      Vec3 n = rng.nonzero_vec3();
      // tau x n here takes rows n x tau_i, i.e. right-multiplication by -mskw(n).
      Rat lhs = dot(vskw(tau), n) * 2;
      Rat rhs = trace(tau * (-mskw(n)));
      if (lhs != rhs) fail(trial, "2 (vskw tau) . n != tr(tau x n)");
    } else if (id == "Sn_eq_vskw_cross") {
      Mat3 tau = rng.mat3();
      Vec3 n = rng.nonzero_vec3();
      // tau x n here takes rows tau_i x n, i.e. right-multiplication by mskw(n).
      Vec3 lhs = S_op(tau) * n;
      Vec3 rhs = vskw(tau * mskw(n)) * Rat(-2);
      if (!(lhs - rhs).is_zero()) fail(trial, "(S tau) n != -2 vskw(tau x n)");
    } else if (id == "curl_mskw") {
      BaryField v = random_class_field(rng, TensorClass::R3, g, deg);
      BaryField res = apply_diffop("curl", mskw_field(v)) + S_field(apply_diffop("grad", v));
      if (!res.is_zero()) fail(trial, "curl(mskw v) + S(grad v) != 0");
    } else if (id == "tr_grad_div") {
      BaryField v = random_class_field(rng, TensorClass::R3, g, deg);
      BaryField res = trace_field(apply_diffop("grad", v)) - apply_diffop("div", v);
      if (!res.is_zero()) fail(trial, "tr(grad v) != div v");
    } else if (id == "bgg_anticommute") {
      // The four anti-commuting squares linking consecutive vector-valued
      // de Rham rows: diagonal maps (id, -2vskw, tr) and (mskw, S, -2vskw).
      BaryField v = random_class_field(rng, TensorClass::R3, g, deg);
      BaryField tau = random_class_field(rng, TensorClass::M, g, deg);
      BaryField sq_a = apply_diffop("curl", v) - vskw_field(apply_diffop("grad", v)) * Rat(2);
      BaryField sq_b =
          trace_field(apply_diffop("curl", tau)) - apply_diffop("div", vskw_field(tau)) * Rat(2);
      BaryField sq_c = apply_diffop("curl", mskw_field(v)) + S_field(apply_diffop("grad", v));
      BaryField sq_d =
          apply_diffop("div", S_field(tau)) - vskw_field(apply_diffop("curl", tau)) * Rat(2);
      if (!sq_a.is_zero()) fail(trial, "curl v != 2 vskw(grad v)");
      else if (!sq_b.is_zero()) fail(trial, "tr(curl tau) != 2 div(vskw tau)");
      else if (!sq_c.is_zero()) fail(trial, "curl(mskw v) != -S(grad v)");
      else if (!sq_d.is_zero()) fail(trial, "div(S tau) != 2 vskw(curl tau)");
    } else {
      throw std::invalid_argument("verify_algebraic_identity: unknown id " + id);
    }
  }
  return rep;
}

inline const std::vector<std::string>& algebraic_identity_names() {
  static const std::vector<std::string> names = {
      "divS_eq_2vskw_curl", "vskw_n_trace", "Sn_eq_vskw_cross",
      "curl_mskw",          "tr_grad_div",  "bgg_anticommute"};
  return names;
}

}  // namespace tetfec

#endif
