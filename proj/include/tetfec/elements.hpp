#ifndef TETFEC_ELEMENTS_HPP
#define TETFEC_ELEMENTS_HPP

/// Finite element constructions on a tetrahedron.
///
/// Each family assembles an ordered, grouped list of degree-of-freedom
/// functionals (point jets and sub-simplex moments) for a polynomial shape
/// space, parameterized by smoothness vectors.  All evaluation is exact
/// rational arithmetic; unisolvence is verified by the rank of the DoF
/// matrix, and failure (non-square or singular) is reported as data, not an
/// exception.
///
/// Families:
///   ScalarCr          C^r scalar elements, shape P_k(T)
///   VecDiv            H(div) vector elements with div-smoothness control
///   VecCurl           H(curl) vector elements with curl-smoothness control
///   DivT              H(div) traceless-matrix elements
///   DivS / DivS_HuZhang / DivS_constrained
///                     H(div) symmetric-matrix elements (three DoF layouts)
///   DivDivPlusS       H(divdiv) symmetric elements, normal-trace continuous
///   DivDivS           H(divdiv) symmetric elements with a local face DoF
///   CurlS             H(curl) symmetric-matrix elements
///   IncS              H(inc) symmetric-matrix elements
///   SymCurlT / SymCurlT_relaxed
///                     H(sym curl) traceless-matrix elements
///   TensorProduct     scalar element tensorized with a tensor class

#include <algorithm>
#include <array>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "tetfec/barypoly.hpp"
#include "tetfec/bubbles.hpp"
#include "tetfec/field.hpp"
#include "tetfec/geometry.hpp"
#include "tetfec/linalg.hpp"
#include "tetfec/mesh.hpp"
#include "tetfec/parallel.hpp"
#include "tetfec/rat.hpp"
#include "tetfec/smoothness.hpp"
#include "tetfec/stability.hpp"
#include "tetfec/tensoralg.hpp"
#include "tetfec/tensorclass.hpp"

namespace tetfec {

// ---------------------------------------------------------------------------
// Families and element parameters
// ---------------------------------------------------------------------------

enum class Family {
  ScalarCr,
  VecDiv,
  VecCurl,
  DivT,
  DivS,
  DivS_HuZhang,
  DivS_constrained,
  DivDivPlusS,
  DivDivS,
  CurlS,
  IncS,
  SymCurlT,
  SymCurlT_relaxed,
  TensorProduct,
};

inline const std::vector<std::pair<Family, std::string>>& family_table() {
  static const std::vector<std::pair<Family, std::string>> t = {
      {Family::ScalarCr, "ScalarCr"},
      {Family::VecDiv, "VecDiv"},
      {Family::VecCurl, "VecCurl"},
      {Family::DivT, "DivT"},
      {Family::DivS, "DivS"},
      {Family::DivS_HuZhang, "DivS_HuZhang"},
      {Family::DivS_constrained, "DivS_constrained"},
      {Family::DivDivPlusS, "DivDivPlusS"},
      {Family::DivDivS, "DivDivS"},
      {Family::CurlS, "CurlS"},
      {Family::IncS, "IncS"},
      {Family::SymCurlT, "SymCurlT"},
      {Family::SymCurlT_relaxed, "SymCurlT_relaxed"},
      {Family::TensorProduct, "TensorProduct"},
  };
  return t;
}

inline std::string family_name(Family f) {
  for (const auto& [fam, name] : family_table())
    if (fam == f) return name;
  throw std::invalid_argument("family_name: unknown family");
}

inline Family family_from_name(const std::string& s) {
  for (const auto& [fam, name] : family_table())
    if (name == s) return fam;
  throw std::invalid_argument("family_from_name: unknown family " + s);
}

/// rs holds the family's smoothness vectors in declaration order:
///   ScalarCr/DivT/DivS/DivS_HuZhang/CurlS/DivDivPlusS/DivDivS: {r}
///   VecDiv: {r2, r3};  VecCurl: {r1, r2};  DivS_constrained: {r2, r3}
///   IncS/SymCurlT(_relaxed): {r1} (optionally {r1, r2} where r2 must equal
///   the derived value);  TensorProduct: {r} with cls the tensor class.
struct ElementParams {
  std::vector<SmoothnessVector> rs;
  int k = 0;
  TensorClass cls = TensorClass::R;
};

enum class DofKind { PointJet, EdgeMoment, FaceMoment, VolumeMoment };

inline std::string dof_kind_name(DofKind k) {
  switch (k) {
    case DofKind::PointJet: return "PointJet";
    case DofKind::EdgeMoment: return "EdgeMoment";
    case DofKind::FaceMoment: return "FaceMoment";
    case DofKind::VolumeMoment: return "VolumeMoment";
  }
  return "?";
}

/// Per-shape-function cache of derived fields ("div", "curl", "inc",
/// "symcurl", ...).  The empty key is the shape function itself.
struct PreCache {
  BaryField base;
  std::map<std::string, BaryField> derived;

  explicit PreCache(BaryField b) : base(std::move(b)) {}

  const BaryField& get(const std::string& op) {
    if (op.empty()) return base;
    auto it = derived.find(op);
    if (it == derived.end()) it = derived.emplace(op, apply_diffop(op, base)).first;
    return it->second;
  }
};

/// One group of DoF functionals attached to a single sub-simplex.  `evaluate`
/// returns exactly `count` values for one shape function; it reads only
/// immutable captured data, so groups may be evaluated concurrently.
struct DofGroup {
  std::string label;  // display tag ("V1", "E2", ...); repeats across (i,j) splits
  DofKind kind = DofKind::VolumeMoment;
  int sub_dim = 3;     // 0 vertex, 1 edge, 2 face, 3 volume
  int sub_id = 0;      // index into the lexicographic sub-simplex list of that dim
  bool local = false;  // true: not identified across elements sharing the sub-simplex
  std::string description;
  int count = 0;
  std::function<std::vector<Rat>(PreCache&)> evaluate;
};

struct ElementDef {
  Family family = Family::ScalarCr;
  ElementParams params;
  GeomPtr host;
  int shape_deg = 0;
  TensorClass shape_cls = TensorClass::R;
  std::vector<BaryField> shape_basis;
  std::vector<DofGroup> groups;
  bool hypothesis_ok = true;
  std::string hypothesis_note;  // which bound failed, if any

  int shape_dim() const { return static_cast<int>(shape_basis.size()); }
  int dof_count() const {
    int n = 0;
    for (const DofGroup& g : groups) n += g.count;
    return n;
  }
  std::array<int, 4> counts_by_dim() const {
    std::array<int, 4> c{0, 0, 0, 0};
    for (const DofGroup& g : groups) c[static_cast<std::size_t>(g.sub_dim)] += g.count;
    return c;
  }
};

struct UnisolvenceReport {
  int dof_count = 0;
  int shape_dim = 0;
  int matrix_rank = 0;
  bool unisolvent = false;
  bool exact = true;  // rank computed in exact arithmetic
  bool hypothesis_ok = true;
  std::array<int, 4> counts_by_dim{0, 0, 0, 0};
};

// ---------------------------------------------------------------------------
// Construction helpers
// ---------------------------------------------------------------------------

namespace eldetail {

using TraceFn = std::function<BaryField(PreCache&)>;

inline GeomPtr sub_geom(const GeomPtr& host, const std::vector<int>& vars) {
  return std::make_shared<const SimplexGeometry>(host->sub(vars));
}

inline EdgeFrame edge_frame_of(const GeomPtr& host, int eid) {
  const auto& ev = detail::local_subsets(1)[static_cast<std::size_t>(eid)];
  return detail::build_edge_frame(host->verts[static_cast<std::size_t>(ev[0])],
                                  host->verts[static_cast<std::size_t>(ev[1])]);
}

inline FaceFrame face_frame_of(const GeomPtr& host, int fid) {
  const auto& fv = detail::local_subsets(2)[static_cast<std::size_t>(fid)];
  return detail::build_face_frame(host->verts[static_cast<std::size_t>(fv[0])],
                                  host->verts[static_cast<std::size_t>(fv[1])],
                                  host->verts[static_cast<std::size_t>(fv[2])]);
}

inline BaryField const_one(const GeomPtr& g) {
  return scalar_field(g, BaryPoly::constant(g->dim, 1));
}

/// Constant unit fields pairing off the storage components of a class.
inline std::vector<BaryField> pattern_fields(const GeomPtr& g, TensorClass cls) {
  std::vector<BaryField> out;
  if (cls == TensorClass::R) {
    out.push_back(const_one(g));
  } else if (cls == TensorClass::R3) {
    out.push_back(constant_vector_field(g, Vec3{1, 0, 0}));
    out.push_back(constant_vector_field(g, Vec3{0, 1, 0}));
    out.push_back(constant_vector_field(g, Vec3{0, 0, 1}));
  } else {
    for (const Mat3& p : class_basis(cls))
      out.push_back(constant_matrix_field(TensorClass::M, g, p));
  }
  return out;
}

/// All derivative multi-indices (a,b,c) with a+b+c = order.
inline std::vector<std::array<int, 3>> words_of_order(int order) {
  std::vector<std::array<int, 3>> w;
  for (int a = order; a >= 0; --a)
    for (int b = order - a; b >= 0; --b) w.push_back({a, b, order - a - b});
  return w;
}

inline BaryField raise_field(const BaryField& f, int deg) {
  BaryField r = f;
  for (auto& p : r.comp) p = p.raised_to(deg);
  return r;
}

/// One field per column of C: sum_i C(i,j) basis[i].
inline std::vector<BaryField> lincomb_cols(const std::vector<BaryField>& basis,
                                           const RatMatrix& C) {
  std::vector<BaryField> out;
  if (basis.empty() || C.cols == 0) return out;
  int deg = 0;
  for (const BaryField& f : basis) deg = std::max(deg, f.degree());
  for (int j = 0; j < C.cols; ++j) {
    BaryField acc = raise_field(basis[0], deg) * C.at(0, j);
    for (int i = 1; i < C.rows; ++i)
      acc = acc + raise_field(basis[static_cast<std::size_t>(i)], deg) * C.at(i, j);
    out.push_back(std::move(acc));
  }
  return out;
}

/// Pairing matrix G(i,j) = normalized integral of tests[i] : cands[j].
inline RatMatrix moment_pairing(const std::vector<BaryField>& tests,
                                const std::vector<BaryField>& cands) {
  RatMatrix G(static_cast<int>(tests.size()), static_cast<int>(cands.size()));
  for (std::size_t i = 0; i < tests.size(); ++i)
    for (std::size_t j = 0; j < cands.size(); ++j)
      G.at(static_cast<int>(i), static_cast<int>(j)) =
          frob(tests[i], cands[j]).integral_normalized();
  return G;
}

/// Members of span(cands) whose moments against every test vanish: the
/// moment realization of the quotient cands / span(tests).
inline std::vector<BaryField> moment_kernel(const std::vector<BaryField>& cands,
                                            const std::vector<BaryField>& tests) {
  if (cands.empty()) return {};
  if (tests.empty()) return cands;
  RatMatrix N = nullspace(moment_pairing(tests, cands));
  return lincomb_cols(cands, N);
}

/// Quotient-plus-complement test space (cands / tests) (+) tests.
inline std::vector<BaryField> quotient_plus(const std::vector<BaryField>& cands,
                                            const std::vector<BaryField>& tests) {
  std::vector<BaryField> out = moment_kernel(cands, tests);
  out.insert(out.end(), tests.begin(), tests.end());
  return out;
}

/// Scalar bubble basis, empty for negative degree.
inline std::vector<BaryField> scalar_space(const GeomPtr& g, int k, const SmoothnessVector& r) {
  if (k < 0) return {};
  return bubble_space(g, k, r, TensorClass::R, "plain").basis;
}

inline std::vector<BaryField> class_space(const GeomPtr& g, int k, const SmoothnessVector& r,
                                          TensorClass cls, const std::string& variant) {
  if (k < 0) return {};
  return bubble_space(g, k, r, cls, variant).basis;
}

/// Full polynomial space P_k on g as scalar fields (empty for k < 0).
inline std::vector<BaryField> full_poly_space(const GeomPtr& g, int k) {
  std::vector<BaryField> out;
  if (k < 0) return out;
  const std::size_t n = mono_table(g->dim, k).list.size();
  for (std::size_t i = 0; i < n; ++i)
    out.push_back(scalar_field(g, detail::unit_mono(g->dim, k, i)));
  return out;
}

/// Tensorize scalars with constant pattern fields on the same geometry.
inline std::vector<BaryField> tensorize(const std::vector<BaryField>& scalars,
                                        const std::vector<BaryField>& patterns) {
  std::vector<BaryField> out;
  for (const BaryField& s : scalars)
    for (const BaryField& p : patterns) out.push_back(mul(s.comp[0], p));
  return out;
}

/// Scalar multiples of fixed constant vectors: {s * d : s in scalars, d in dirs}.
inline std::vector<BaryField> along_vectors(const GeomPtr& g, const std::vector<BaryField>& scalars,
                                            const std::vector<Vec3>& dirs) {
  std::vector<BaryField> out;
  for (const BaryField& s : scalars)
    for (const Vec3& d : dirs) out.push_back(mul(s.comp[0], constant_vector_field(g, d)));
  return out;
}

struct ImageReport {
  int input_dim = 0;
  int rank = 0;
};

inline RatMatrix coeff_columns(const std::vector<BaryField>& fields) {
  int deg = 0;
  for (const BaryField& f : fields) deg = std::max(deg, f.degree());
  std::vector<std::vector<Rat>> cols;
  for (const BaryField& f : fields) cols.push_back(detail::field_coeffs(f, deg));
  RatMatrix A(static_cast<int>(cols[0].size()), static_cast<int>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j)
    for (std::size_t i = 0; i < cols[j].size(); ++i)
      A.at(static_cast<int>(i), static_cast<int>(j)) = cols[j][i];
  return A;
}

/// Image of a differential operator over a space, de-duplicated to an
/// independent subset by exact column reduction.
inline std::vector<BaryField> image_space(const std::vector<BaryField>& inputs,
                                          const std::string& op, ImageReport* rep = nullptr) {
  std::vector<BaryField> images;
  for (const BaryField& f : inputs) images.push_back(apply_diffop(op, f));
  if (rep) rep->input_dim = static_cast<int>(images.size());
  if (images.empty()) return {};
  RatMatrix A = coeff_columns(images);
  RatMatrix empty(A.rows, 0);
  std::vector<int> keep = complement_columns(empty, A);
  if (rep) rep->rank = static_cast<int>(keep.size());
  std::vector<BaryField> out;
  for (int j : keep) out.push_back(images[static_cast<std::size_t>(j)]);
  return out;
}

/// Subspace of span(space) annihilated by a differential operator.
inline std::vector<BaryField> kernel_intersect(const std::vector<BaryField>& space,
                                               const std::string& op) {
  if (space.empty()) return {};
  std::vector<BaryField> images;
  for (const BaryField& f : space) images.push_back(apply_diffop(op, f));
  RatMatrix N = nullspace(coeff_columns(images));
  return lincomb_cols(space, N);
}

/// a^T f b as a scalar field.
inline BaryField sandwich(const BaryField& f, const Vec3& a, const Vec3& b) {
  return dot_const(matvec(f, b), a);
}

// ---------------------------------------------------------------------------
// Group factories
// ---------------------------------------------------------------------------

/// Moments of a traced field against fixed test fields on a sub-simplex.
inline DofGroup moment_group(std::string label, DofKind kind, int sub_dim, int sub_id, bool local,
                             std::string desc, TraceFn tr, std::vector<BaryField> tests) {
  DofGroup g;
  g.label = std::move(label);
  g.kind = kind;
  g.sub_dim = sub_dim;
  g.sub_id = sub_id;
  g.local = local;
  g.description = std::move(desc);
  g.count = static_cast<int>(tests.size());
  g.evaluate = [tr = std::move(tr), tests = std::move(tests)](PreCache& pc) {
    std::vector<Rat> vals;
    vals.reserve(tests.size());
    if (tests.empty()) return vals;
    BaryField t = tr(pc);
    for (const BaryField& q : tests) vals.push_back(frob(t, q).integral_normalized());
    return vals;
  };
  return g;
}

/// All order-j derivatives of (derived field : pattern) evaluated at vertex v.
inline DofGroup point_jet_group(std::string label, const GeomPtr& host, int v, int order,
                                std::string op, std::vector<BaryField> patterns,
                                std::string desc) {
  DofGroup g;
  g.label = std::move(label);
  g.kind = DofKind::PointJet;
  g.sub_dim = 0;
  g.sub_id = v;
  g.description = std::move(desc);
  const auto words = words_of_order(order);
  g.count = static_cast<int>(words.size() * patterns.size());
  g.evaluate = [host, v, op = std::move(op), patterns = std::move(patterns), words](PreCache& pc) {
    const BaryField& derived = pc.get(op);
    std::vector<BaryPoly> sp;
    sp.reserve(patterns.size());
    for (const BaryField& p : patterns) sp.push_back(frob(derived, p));
    std::vector<Rat> vals;
    vals.reserve(words.size() * sp.size());
    for (const auto& w : words)
      for (const BaryPoly& s0 : sp) {
        BaryPoly s = s0;
        for (int axis = 0; axis < 3; ++axis)
          for (int rep = 0; rep < w[static_cast<std::size_t>(axis)]; ++rep)
            s = partial(s, axis, *host);
        vals.push_back(s.restricted({v}).c[0]);
      }
    return vals;
  };
  return g;
}

/// Trace factories.  Bases produce host-level fields from the cache;
/// `jet_of` takes ambient directional derivatives (a along d1, b along d2)
/// and then restricts to the sub-simplex.
inline TraceFn field_base(std::string op) {
  return [op = std::move(op)](PreCache& pc) { return pc.get(op); };
}

inline TraceFn dot_base(std::string op, Vec3 v) {
  return [op = std::move(op), v](PreCache& pc) { return dot_const(pc.get(op), v); };
}

inline TraceFn matvec_base(std::string op, Vec3 v) {
  return [op = std::move(op), v](PreCache& pc) { return matvec(pc.get(op), v); };
}

inline TraceFn sandwich_base(std::string op, Vec3 a, Vec3 b) {
  return [op = std::move(op), a, b](PreCache& pc) { return sandwich(pc.get(op), a, b); };
}

inline TraceFn jet_of(TraceFn base, int a, Vec3 d1, int b, Vec3 d2, std::vector<int> sub) {
  return [base = std::move(base), a, d1, b, d2, sub = std::move(sub)](PreCache& pc) {
    BaryField s = base(pc);
    for (int i = 0; i < a; ++i) s = dir_deriv(s, d1);
    for (int i = 0; i < b; ++i) s = dir_deriv(s, d2);
    return restrict_field(s, sub);
  };
}

inline TraceFn restrict_of(TraceFn base, std::vector<int> sub) {
  return [base = std::move(base), sub = std::move(sub)](PreCache& pc) {
    return restrict_field(base(pc), sub);
  };
}

// ---------------------------------------------------------------------------
// Shape space
// ---------------------------------------------------------------------------

inline std::vector<BaryField> make_shape_basis(const GeomPtr& host, int deg, TensorClass cls) {
  std::vector<BaryField> out;
  if (deg < 0) return out;
  const std::size_t n = mono_table(host->dim, deg).list.size();
  if (cls == TensorClass::R) {
    for (std::size_t i = 0; i < n; ++i)
      out.push_back(scalar_field(host, detail::unit_mono(host->dim, deg, i)));
    return out;
  }
  if (cls == TensorClass::R3) {
    const Vec3 e[3] = {Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{0, 0, 1}};
    for (int c = 0; c < 3; ++c)
      for (std::size_t i = 0; i < n; ++i)
        out.push_back(
            mul(detail::unit_mono(host->dim, deg, i), constant_vector_field(host, e[c])));
    return out;
  }
  for (const Mat3& p : class_basis(cls))
    for (std::size_t i = 0; i < n; ++i)
      out.push_back(mul(detail::unit_mono(host->dim, deg, i),
                        constant_matrix_field(cls, host, p)));
  return out;
}

/// DoF rows of the given groups over a shape basis (rows = functionals).
inline RatMatrix eval_group_rows(const std::vector<DofGroup>& groups,
                                 const std::vector<BaryField>& basis, unsigned jobs = 0) {
  int rows = 0;
  for (const DofGroup& g : groups) rows += g.count;
  RatMatrix A(rows, static_cast<int>(basis.size()));
  parallel_for(
      basis.size(),
      [&](std::size_t j) {
        PreCache pc(basis[j]);
        int row = 0;
        for (const DofGroup& g : groups) {
          std::vector<Rat> vals = g.evaluate(pc);
          if (static_cast<int>(vals.size()) != g.count)
            throw std::logic_error("eval_group_rows: group count mismatch (" + g.label + ")");
          for (int i = 0; i < g.count; ++i) A.at(row + i, static_cast<int>(j)) = vals[i];
          row += g.count;
        }
      },
      jobs);
  return A;
}

inline SmoothnessVector cmax(const SmoothnessVector& a, const SmoothnessVector& b) {
  return {std::max(a.r_v, b.r_v), std::max(a.r_e, b.r_e), std::max(a.r_f, b.r_f)};
}

inline SmoothnessVector edge_only(int m) { return {std::max(m, -1), -1, -1}; }

}  // namespace eldetail

// ---------------------------------------------------------------------------
// Tangential face bubbles with vanishing edge-normal trace
// ---------------------------------------------------------------------------

/// Vector fields on a face (tangential, degree k) whose scalar bubble factor
/// satisfies the (r_v, r_e) vanishing conditions and whose in-plane normal
/// component vanishes on every boundary edge of the face.  For r_e >= 0 the
/// edge constraints are implied; for r_e = -1 they carry the edge tangential
/// blocks that make the space strictly larger than the plain bubble.
inline std::vector<BaryField> face_div_bubble(const GeomPtr& fg, int k,
                                              const SmoothnessVector& r) {
  static std::map<std::string, std::vector<BaryField>> cache;
  static std::mutex mu;
  std::ostringstream key;
  key << detail::geom_key(fg) << "|" << k << "|" << to_string(r);
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key.str());
    if (it != cache.end()) return it->second;
  }
  if (fg->dim != 2) throw std::invalid_argument("face_div_bubble: face geometry required");
  std::vector<BaryField> cands;
  {
    FaceFrame fr = detail::build_face_frame(fg->verts[0], fg->verts[1], fg->verts[2]);
    cands = eldetail::along_vectors(fg, eldetail::scalar_space(fg, k, r), {fr.t1, fr.t2});
  }
  std::vector<BaryField> out;
  if (!cands.empty()) {
    const Vec3 n = fg->normal();
    // Constraint rows: coefficients of v . n_{f,e} restricted to each edge.
    std::vector<std::vector<Rat>> cols(cands.size());
    for (const auto& ev : detail::local_subsets(1)) {
      if (ev.size() != 2 || ev[0] > 2 || ev[1] > 2) continue;
      Vec3 te = fg->verts[static_cast<std::size_t>(ev[1])] -
                fg->verts[static_cast<std::size_t>(ev[0])];
      Vec3 nfe = cross(n, te);
      for (std::size_t j = 0; j < cands.size(); ++j) {
        BaryPoly tr = restrict_field(dot_const(cands[j], nfe), ev).comp[0].raised_to(k);
        cols[j].insert(cols[j].end(), tr.c.begin(), tr.c.end());
      }
    }
    RatMatrix A(static_cast<int>(cols[0].size()), static_cast<int>(cols.size()));
    for (std::size_t j = 0; j < cols.size(); ++j)
      for (std::size_t i = 0; i < cols[j].size(); ++i)
        A.at(static_cast<int>(i), static_cast<int>(j)) = cols[j][i];
    out = eldetail::lincomb_cols(cands, nullspace(A));
  }
  std::lock_guard<std::mutex> lock(mu);
  return cache.emplace(key.str(), std::move(out)).first->second;
}

/// Rotated face bubbles {n x w : w in face_div_bubble}.
inline std::vector<BaryField> face_rot_bubble(const GeomPtr& fg, int k,
                                              const SmoothnessVector& r) {
  const Mat3 M = mskw(fg->normal());
  std::vector<BaryField> out;
  for (const BaryField& w : face_div_bubble(fg, k, r)) out.push_back(mat_apply(M, w));
  return out;
}

// ---------------------------------------------------------------------------
// Family group lists
// ---------------------------------------------------------------------------

namespace eldetail {

/// Scalar C^r layout tensorized with a class: vertex jets, edge/face jet
/// moments and interior moments, paired with the class patterns.  cls == R
/// is the scalar element itself.
inline std::vector<DofGroup> scalar_product_groups(const GeomPtr& host, const SmoothnessVector& r,
                                                   int k, TensorClass cls) {
  std::vector<DofGroup> gs;
  std::vector<BaryField> vol_patterns = pattern_fields(host, cls);
  for (int v = 0; v < 4; ++v)
    for (int j = 0; j <= r.r_v; ++j)
      gs.push_back(point_jet_group("V", host, v, j, "", vol_patterns,
                                   "order-" + std::to_string(j) + " jet of the field"));
  if (r.r_e >= 0) {
    for (int e = 0; e < 6; ++e) {
      const auto& ev = detail::local_subsets(1)[static_cast<std::size_t>(e)];
      GeomPtr eg = sub_geom(host, ev);
      EdgeFrame fr = edge_frame_of(host, e);
      std::vector<BaryField> pats = pattern_fields(eg, cls);
      for (int j = 0; j <= r.r_e; ++j) {
        std::vector<BaryField> tests =
            tensorize(scalar_space(eg, k - j, edge_only(r.r_v - j)), pats);
        for (int i = 0; i <= j; ++i)
          gs.push_back(moment_group("E", DofKind::EdgeMoment, 1, e, false,
                                    "normal-derivative (" + std::to_string(i) + "," +
                                        std::to_string(j - i) + ") moment",
                                    jet_of(field_base(""), i, fr.n1, j - i, fr.n2, ev), tests));
      }
    }
  }
  if (r.r_f >= 0) {
    for (int f = 0; f < 4; ++f) {
      const auto& fv = detail::local_subsets(2)[static_cast<std::size_t>(f)];
      GeomPtr fg = sub_geom(host, fv);
      FaceFrame fr = face_frame_of(host, f);
      std::vector<BaryField> pats = pattern_fields(fg, cls);
      for (int j = 0; j <= r.r_f; ++j) {
        std::vector<BaryField> tests = tensorize(scalar_space(fg, k - j, ominus(r, j)), pats);
        gs.push_back(moment_group("F", DofKind::FaceMoment, 2, f, false,
                                  "normal-derivative order-" + std::to_string(j) + " moment",
                                  jet_of(field_base(""), j, fr.n, 0, fr.n, fv), tests));
      }
    }
  }
  gs.push_back(moment_group("T", DofKind::VolumeMoment, 3, 0, false, "interior moment",
                            field_base(""), tensorize(scalar_space(host, k, r), vol_patterns)));
  return gs;
}

/// H(div) vector element: normal-component continuity plus controlled
/// smoothness of the field (r2) and of its divergence (r3).
inline std::vector<DofGroup> vecdiv_groups(const GeomPtr& host, const SmoothnessVector& r2,
                                           const SmoothnessVector& r3, int k) {
  std::vector<DofGroup> gs;
  std::vector<BaryField> r3pat = pattern_fields(host, TensorClass::R3);
  std::vector<BaryField> rpat = pattern_fields(host, TensorClass::R);
  for (int v = 0; v < 4; ++v)
    for (int j = 0; j <= r2.r_v; ++j)
      gs.push_back(point_jet_group("V1", host, v, j, "", r3pat,
                                   "order-" + std::to_string(j) + " jet of the field"));
  for (int v = 0; v < 4; ++v)
    for (int j = std::max(r2.r_v, 0); j <= r3.r_v; ++j)
      gs.push_back(point_jet_group("V2", host, v, j, "div", rpat,
                                   "order-" + std::to_string(j) + " jet of div"));
  for (int e = 0; e < 6; ++e) {
    const auto& ev = detail::local_subsets(1)[static_cast<std::size_t>(e)];
    GeomPtr eg = sub_geom(host, ev);
    EdgeFrame fr = edge_frame_of(host, e);
    for (int j = 0; j <= r2.r_e; ++j) {
      std::vector<BaryField> tests = scalar_space(eg, k - j, edge_only(r2.r_v - j));
      gs.push_back(moment_group("E1", DofKind::EdgeMoment, 1, e, false,
                                "pure-n1 derivative of v.n2, order " + std::to_string(j),
                                jet_of(dot_base("", fr.n2), j, fr.n1, 0, fr.n2, ev), tests));
      for (int i = 0; i <= j; ++i) {
        gs.push_back(moment_group("E2", DofKind::EdgeMoment, 1, e, false,
                                  "mixed derivative of v.t (" + std::to_string(i) + "," +
                                      std::to_string(j - i) + ")",
                                  jet_of(dot_base("", fr.t), i, fr.n1, j - i, fr.n2, ev), tests));
        gs.push_back(moment_group("E3", DofKind::EdgeMoment, 1, e, false,
                                  "mixed derivative of v.n1 (" + std::to_string(i) + "," +
                                      std::to_string(j - i) + ")",
                                  jet_of(dot_base("", fr.n1), i, fr.n1, j - i, fr.n2, ev), tests));
      }
    }
    for (int j = 0; j <= r3.r_e; ++j) {
      std::vector<BaryField> tests = scalar_space(eg, k - 1 - j, edge_only(r3.r_v - j));
      for (int i = 0; i <= j; ++i)
        gs.push_back(moment_group("E4", DofKind::EdgeMoment, 1, e, false,
                                  "mixed derivative of div v (" + std::to_string(i) + "," +
                                      std::to_string(j - i) + ")",
                                  jet_of(field_base("div"), i, fr.n1, j - i, fr.n2, ev), tests));
    }
  }
  for (int f = 0; f < 4; ++f) {
    const auto& fv = detail::local_subsets(2)[static_cast<std::size_t>(f)];
    GeomPtr fg = sub_geom(host, fv);
    FaceFrame fr = face_frame_of(host, f);
    {
      std::vector<BaryField> tests = {const_one(fg)};
      std::vector<BaryField> ker = moment_kernel(
          scalar_space(fg, k, {r2.r_v, r2.r_e, -1}), {const_one(fg)});
      tests.insert(tests.end(), ker.begin(), ker.end());
      gs.push_back(moment_group("F1", DofKind::FaceMoment, 2, f, false,
                                "normal flux moment (constant plus zero-mean bubble)",
                                restrict_of(dot_base("", fr.n), fv), tests));
    }
    for (int j = 0; j <= r2.r_f; ++j) {
      std::vector<BaryField> tests = scalar_space(fg, k - j, ominus(r2, j));
      const Vec3 ts[2] = {fr.t1, fr.t2};
      for (int l = 0; l < 2; ++l)
        gs.push_back(moment_group("F2", DofKind::FaceMoment, 2, f, false,
                                  "normal derivative of v.t" + std::to_string(l + 1) +
                                      ", order " + std::to_string(j),
                                  jet_of(dot_base("", ts[l]), j, fr.n, 0, fr.n, fv), tests));
    }
    for (int j = 0; j <= r3.r_f; ++j)
      gs.push_back(moment_group("F3", DofKind::FaceMoment, 2, f, false,
                                "normal derivative of div v, order " + std::to_string(j),
                                jet_of(field_base("div"), j, fr.n, 0, fr.n, fv),
                                scalar_space(fg, k - 1 - j, ominus(r3, j))));
  }
  gs.push_back(moment_group("T1", DofKind::VolumeMoment, 3, 0, false,
                            "div moment against zero-mean interior bubble", field_base("div"),
                            moment_kernel(scalar_space(host, k - 1, r3), {const_one(host)})));
  gs.push_back(moment_group("T2", DofKind::VolumeMoment, 3, 0, false,
                            "moment against divergence-free div-bubble", field_base(""),
                            kernel_intersect(class_space(host, k, r2, TensorClass::R3, "div"),
                                             "div")));
  return gs;
}

/// H(curl) vector element: tangential continuity of the field (r1) and
/// controlled smoothness of its curl (r2); shape degree k+1.
inline std::vector<DofGroup> veccurl_groups(const GeomPtr& host, const SmoothnessVector& r1,
                                            const SmoothnessVector& r2, int k) {
  std::vector<DofGroup> gs;
  std::vector<BaryField> r3pat = pattern_fields(host, TensorClass::R3);
  for (int v = 0; v < 4; ++v)
    for (int j = 0; j <= r1.r_v; ++j)
      gs.push_back(point_jet_group("V1", host, v, j, "", r3pat,
                                   "order-" + std::to_string(j) + " jet of the field"));
  for (int v = 0; v < 4; ++v)
    for (int j = std::max(r1.r_v, 0); j <= r2.r_v; ++j)
      gs.push_back(point_jet_group("V2", host, v, j, "curl", r3pat,
                                   "order-" + std::to_string(j) + " jet of curl"));
  for (int e = 0; e < 6; ++e) {
    const auto& ev = detail::local_subsets(1)[static_cast<std::size_t>(e)];
    GeomPtr eg = sub_geom(host, ev);
    EdgeFrame fr = edge_frame_of(host, e);
    gs.push_back(moment_group("E1", DofKind::EdgeMoment, 1, e, false, "tangential moment of v",
                              restrict_of(dot_base("", fr.t), ev),
                              scalar_space(eg, k + 1, edge_only(r1.r_v))));
    for (int j = 0; j <= r1.r_e; ++j) {
      std::vector<BaryField> tests = scalar_space(eg, k + 1 - j, edge_only(r1.r_v - j));
      for (int i = 0; i <= j; ++i)
        gs.push_back(moment_group("E2", DofKind::EdgeMoment, 1, e, false,
                                  "mixed derivative of v.n1 (" + std::to_string(i) + "," +
                                      std::to_string(j - i) + ")",
                                  jet_of(dot_base("", fr.n1), i, fr.n1, j - i, fr.n2, ev), tests));
      gs.push_back(moment_group("E3", DofKind::EdgeMoment, 1, e, false,
                                "pure-n2 derivative of v.n2, order " + std::to_string(j),
                                jet_of(dot_base("", fr.n2), 0, fr.n1, j, fr.n2, ev), tests));
    }
    for (int j = 0; j <= r2.r_e; ++j) {
      std::vector<BaryField> tests = scalar_space(eg, k - j, edge_only(r2.r_v - j));
      gs.push_back(moment_group("E4", DofKind::EdgeMoment, 1, e, false,
                                "pure-n1 derivative of (curl v).n2, order " + std::to_string(j),
                                jet_of(dot_base("curl", fr.n2), j, fr.n1, 0, fr.n2, ev), tests));
      for (int i = 0; i <= j; ++i) {
        gs.push_back(moment_group("E5", DofKind::EdgeMoment, 1, e, false,
                                  "mixed derivative of (curl v).t (" + std::to_string(i) + "," +
                                      std::to_string(j - i) + ")",
                                  jet_of(dot_base("curl", fr.t), i, fr.n1, j - i, fr.n2, ev),
                                  tests));
        gs.push_back(moment_group("E6", DofKind::EdgeMoment, 1, e, false,
                                  "mixed derivative of (curl v).n1 (" + std::to_string(i) + "," +
                                      std::to_string(j - i) + ")",
                                  jet_of(dot_base("curl", fr.n1), i, fr.n1, j - i, fr.n2, ev),
                                  tests));
      }
    }
  }
  for (int f = 0; f < 4; ++f) {
    const auto& fv = detail::local_subsets(2)[static_cast<std::size_t>(f)];
    GeomPtr fg = sub_geom(host, fv);
    FaceFrame fr = face_frame_of(host, f);
    gs.push_back(moment_group("F1", DofKind::FaceMoment, 2, f, false,
                              "tangential moment against surface gradients",
                              restrict_of(field_base(""), fv),
                              image_space(scalar_space(fg, k + 2, r1 + 1), "grad_f")));
    for (int j = 0; j <= r1.r_f; ++j)
      gs.push_back(moment_group("F2", DofKind::FaceMoment, 2, f, false,
                                "normal derivative of v.n, order " + std::to_string(j),
                                jet_of(dot_base("", fr.n), j, fr.n, 0, fr.n, fv),
                                scalar_space(fg, k + 1 - j, ominus(r1, j))));
    gs.push_back(moment_group("F3", DofKind::FaceMoment, 2, f, false,
                              "normal component of curl against zero-mean bubble",
                              restrict_of(dot_base("curl", fr.n), fv),
                              moment_kernel(scalar_space(fg, k, {r2.r_v, r2.r_e, -1}),
                                            {const_one(fg)})));
    for (int j = 0; j <= r2.r_f; ++j) {
      std::vector<BaryField> tests = scalar_space(fg, k - j, ominus(r2, j));
      const Vec3 ts[2] = {fr.t1, fr.t2};
      for (int l = 0; l < 2; ++l)
        gs.push_back(moment_group("F4", DofKind::FaceMoment, 2, f, false,
                                  "normal derivative of (curl v).t" + std::to_string(l + 1) +
                                      ", order " + std::to_string(j),
                                  jet_of(dot_base("curl", ts[l]), j, fr.n, 0, fr.n, fv), tests));
    }
  }
  gs.push_back(moment_group("T1", DofKind::VolumeMoment, 3, 0, false,
                            "curl moment against divergence-free div-bubble", field_base("curl"),
                            kernel_intersect(class_space(host, k, r2, TensorClass::R3, "div"),
                                             "div")));
  gs.push_back(moment_group("T2", DofKind::VolumeMoment, 3, 0, false,
                            "moment against interior gradients", field_base(""),
                            image_space(scalar_space(host, k + 2, r1 + 1), "grad")));
  return gs;
}

/// H(div) traceless-matrix element (normal-trace continuity via face groups).
inline std::vector<DofGroup> divT_groups(const GeomPtr& host, const SmoothnessVector& r, int k) {
  std::vector<DofGroup> gs;
  std::vector<BaryField> tpat = pattern_fields(host, TensorClass::T);
  for (int v = 0; v < 4; ++v)
    for (int j = 0; j <= r.r_v; ++j)
      gs.push_back(point_jet_group("V", host, v, j, "", tpat,
                                   "order-" + std::to_string(j) + " jet of the field"));
  if (r.r_e >= 0) {
    for (int e = 0; e < 6; ++e) {
      const auto& ev = detail::local_subsets(1)[static_cast<std::size_t>(e)];
      GeomPtr eg = sub_geom(host, ev);
      EdgeFrame fr = edge_frame_of(host, e);
      std::vector<BaryField> pats = pattern_fields(eg, TensorClass::T);
      for (int j = 0; j <= r.r_e; ++j) {
        std::vector<BaryField> tests =
            tensorize(scalar_space(eg, k - j, edge_only(r.r_v - j)), pats);
        for (int i = 0; i <= j; ++i)
          gs.push_back(moment_group("E", DofKind::EdgeMoment, 1, e, false,
                                    "mixed derivative (" + std::to_string(i) + "," +
                                        std::to_string(j - i) + ") moment",
                                    jet_of(field_base(""), i, fr.n1, j - i, fr.n2, ev), tests));
      }
    }
  }
  for (int f = 0; f < 4; ++f) {
    const auto& fv = detail::local_subsets(2)[static_cast<std::size_t>(f)];
    GeomPtr fg = sub_geom(host, fv);
    FaceFrame fr = face_frame_of(host, f);
    const Mat3 P = proj_plane(fr.n);
    {
      std::vector<BaryField> cands =
          along_vectors(fg, scalar_space(fg, k, {r.r_v, r.r_e, -1}), {fr.t1, fr.t2});
      std::vector<BaryField> tests = quotient_plus(cands, kernel_space("RT_f", fg).basis);
      TraceFn tr = [P, n = fr.n, fv](PreCache& pc) {
        return restrict_field(mat_apply(P, matvec(pc.get(""), n)), fv);
      };
      gs.push_back(moment_group("F1", DofKind::FaceMoment, 2, f, false,
                                "tangential normal-trace moment", tr, std::move(tests)));
    }
    gs.push_back(moment_group("F2", DofKind::FaceMoment, 2, f, false,
                              "normal-normal trace moment",
                              restrict_of(sandwich_base("", fr.n, fr.n), fv),
                              quotient_plus(scalar_space(fg, k, {r.r_v, r.r_e, -1}),
                                            {const_one(fg)})));
  }
  gs.push_back(moment_group("T", DofKind::VolumeMoment, 3, 0, false, "interior div-bubble moment",
                            field_base(""), class_space(host, k, r, TensorClass::T, "div")));
  return gs;
}

/// H(div) symmetric-matrix element with edge normal-normal moments at
/// discontinuous edge smoothness.
inline std::vector<DofGroup> divS_groups(const GeomPtr& host, const SmoothnessVector& r, int k) {
  std::vector<DofGroup> gs;
  std::vector<BaryField> spat = pattern_fields(host, TensorClass::S);
  for (int v = 0; v < 4; ++v)
    for (int j = 0; j <= r.r_v; ++j)
      gs.push_back(point_jet_group("V", host, v, j, "", spat,
                                   "order-" + std::to_string(j) + " jet of the field"));
  for (int e = 0; e < 6; ++e) {
    const auto& ev = detail::local_subsets(1)[static_cast<std::size_t>(e)];
    GeomPtr eg = sub_geom(host, ev);
    EdgeFrame fr = edge_frame_of(host, e);
    if (r.r_e >= 0) {
      std::vector<BaryField> pats = pattern_fields(eg, TensorClass::S);
      for (int j = 0; j <= r.r_e; ++j) {
        std::vector<BaryField> tests =
            tensorize(scalar_space(eg, k - j, edge_only(r.r_v - j)), pats);
        for (int i = 0; i <= j; ++i)
          gs.push_back(moment_group("E1", DofKind::EdgeMoment, 1, e, false,
                                    "mixed derivative (" + std::to_string(i) + "," +
                                        std::to_string(j - i) + ") moment",
                                    jet_of(field_base(""), i, fr.n1, j - i, fr.n2, ev), tests));
      }
    } else {
      std::vector<BaryField> tests = scalar_space(eg, k, edge_only(r.r_v));
      const std::pair<Vec3, Vec3> nn[3] = {{fr.n1, fr.n1}, {fr.n1, fr.n2}, {fr.n2, fr.n2}};
      for (const auto& [a, b] : nn)
        gs.push_back(moment_group("E2", DofKind::EdgeMoment, 1, e, false,
                                  "normal-normal component moment",
                                  restrict_of(sandwich_base("", a, b), ev), tests));
    }
  }
  for (int f = 0; f < 4; ++f) {
    const auto& fv = detail::local_subsets(2)[static_cast<std::size_t>(f)];
    GeomPtr fg = sub_geom(host, fv);
    FaceFrame fr = face_frame_of(host, f);
    const Mat3 P = proj_plane(fr.n);
    {
      TraceFn tr = [P, n = fr.n, fv](PreCache& pc) {
        return restrict_field(mat_apply(P, matvec(pc.get(""), n)), fv);
      };
      gs.push_back(moment_group("F1", DofKind::FaceMoment, 2, f, false,
                                "tangential normal-trace moment", tr,
                                quotient_plus(face_div_bubble(fg, k, {r.r_v, r.r_e, -1}),
                                              kernel_space("RM_f", fg).basis)));
    }
    gs.push_back(moment_group("F2", DofKind::FaceMoment, 2, f, false,
                              "normal-normal trace moment",
                              restrict_of(sandwich_base("", fr.n, fr.n), fv),
                              quotient_plus(scalar_space(fg, k, plus(r)),
                                            kernel_space("P1", fg).basis)));
  }
  gs.push_back(moment_group("T", DofKind::VolumeMoment, 3, 0, false, "interior div-bubble moment",
                            field_base(""), class_space(host, k, r, TensorClass::S, "div")));
  return gs;
}

/// H(div) symmetric-matrix element with full edge trace moments (all five
/// normal-touching components) and full face trace moments.
inline std::vector<DofGroup> divS_huzhang_groups(const GeomPtr& host, const SmoothnessVector& r,
                                                 int k) {
  std::vector<DofGroup> gs;
  std::vector<BaryField> spat = pattern_fields(host, TensorClass::S);
  for (int v = 0; v < 4; ++v)
    for (int j = 0; j <= r.r_v; ++j)
      gs.push_back(point_jet_group("V", host, v, j, "", spat,
                                   "order-" + std::to_string(j) + " jet of the field"));
  for (int e = 0; e < 6; ++e) {
    const auto& ev = detail::local_subsets(1)[static_cast<std::size_t>(e)];
    GeomPtr eg = sub_geom(host, ev);
    EdgeFrame fr = edge_frame_of(host, e);
    std::vector<BaryField> tests = scalar_space(eg, k, edge_only(r.r_v));
    const std::pair<Vec3, Vec3> nn[3] = {{fr.n1, fr.n1}, {fr.n1, fr.n2}, {fr.n2, fr.n2}};
    for (const auto& [a, b] : nn)
      gs.push_back(moment_group("E1", DofKind::EdgeMoment, 1, e, false,
                                "normal-normal component moment",
                                restrict_of(sandwich_base("", a, b), ev), tests));
    const Vec3 ns[2] = {fr.n1, fr.n2};
    for (const Vec3& nj : ns)
      gs.push_back(moment_group("E2", DofKind::EdgeMoment, 1, e, false,
                                "tangential-normal component moment",
                                restrict_of(sandwich_base("", fr.t, nj), ev), tests));
  }
  for (int f = 0; f < 4; ++f) {
    const auto& fv = detail::local_subsets(2)[static_cast<std::size_t>(f)];
    GeomPtr fg = sub_geom(host, fv);
    FaceFrame fr = face_frame_of(host, f);
    const Mat3 P = proj_plane(fr.n);
    TraceFn tr = [P, n = fr.n, fv](PreCache& pc) {
      return restrict_field(mat_apply(P, matvec(pc.get(""), n)), fv);
    };
    gs.push_back(moment_group("F1", DofKind::FaceMoment, 2, f, false,
                              "tangential normal-trace moment (full bubble)", tr,
                              along_vectors(fg, scalar_space(fg, k, plus(r)), {fr.t1, fr.t2})));
    gs.push_back(moment_group("F2", DofKind::FaceMoment, 2, f, false,
                              "normal-normal trace moment (full bubble)",
                              restrict_of(sandwich_base("", fr.n, fr.n), fv),
                              scalar_space(fg, k, plus(r))));
  }
  gs.push_back(moment_group("T", DofKind::VolumeMoment, 3, 0, false, "interior div-bubble moment",
                            field_base(""), class_space(host, k, r, TensorClass::S, "div")));
  return gs;
}

/// H(div) symmetric-matrix element with additionally controlled divergence
/// smoothness (r3); the edge and face groups split the trace into
/// tangential/normal scalar components.
inline std::vector<DofGroup> divS_constrained_groups(const GeomPtr& host,
                                                     const SmoothnessVector& r2,
                                                     const SmoothnessVector& r3, int k) {
  std::vector<DofGroup> gs;
  std::vector<BaryField> spat = pattern_fields(host, TensorClass::S);
  std::vector<BaryField> r3pat = pattern_fields(host, TensorClass::R3);
  const std::vector<Vec3> axes = {Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{0, 0, 1}};
  for (int v = 0; v < 4; ++v)
    for (int j = 0; j <= r2.r_v; ++j)
      gs.push_back(point_jet_group("V1", host, v, j, "", spat,
                                   "order-" + std::to_string(j) + " jet of the field"));
  for (int v = 0; v < 4; ++v)
    for (int j = std::max(r2.r_v, 0); j <= r3.r_v; ++j)
      gs.push_back(point_jet_group("V2", host, v, j, "div", r3pat,
                                   "order-" + std::to_string(j) + " jet of div"));
  for (int e = 0; e < 6; ++e) {
    const auto& ev = detail::local_subsets(1)[static_cast<std::size_t>(e)];
    GeomPtr eg = sub_geom(host, ev);
    EdgeFrame fr = edge_frame_of(host, e);
    for (int j = 0; j <= r2.r_e; ++j)
      gs.push_back(moment_group("E1", DofKind::EdgeMoment, 1, e, false,
                                "pure-n1 derivative of (tau n2), order " + std::to_string(j),
                                jet_of(matvec_base("", fr.n2), j, fr.n1, 0, fr.n2, ev),
                                along_vectors(eg, scalar_space(eg, k - j, edge_only(r2.r_v - j)),
                                              axes)));
    if (r2.r_e < 0) {
      std::vector<BaryField> tests = scalar_space(eg, k, edge_only(r2.r_v));
      const std::pair<Vec3, Vec3> nn[3] = {{fr.n1, fr.n1}, {fr.n1, fr.n2}, {fr.n2, fr.n2}};
      for (const auto& [a, b] : nn)
        gs.push_back(moment_group("E2", DofKind::EdgeMoment, 1, e, false,
                                  "normal-normal component moment",
                                  restrict_of(sandwich_base("", a, b), ev), tests));
    }
    for (int j = 0; j <= r2.r_e; ++j) {
      std::vector<BaryField> tests = scalar_space(eg, k - j, edge_only(r2.r_v - j));
      for (int i = 0; i <= j; ++i) {
        gs.push_back(moment_group("E4", DofKind::EdgeMoment, 1, e, false,
                                  "mixed derivative of t.tau.t (" + std::to_string(i) + "," +
                                      std::to_string(j - i) + ")",
                                  jet_of(sandwich_base("", fr.t, fr.t), i, fr.n1, j - i, fr.n2,
                                         ev),
                                  tests));
        gs.push_back(moment_group("E5", DofKind::EdgeMoment, 1, e, false,
                                  "mixed derivative of t.tau.n1 (" + std::to_string(i) + "," +
                                      std::to_string(j - i) + ")",
                                  jet_of(sandwich_base("", fr.t, fr.n1), i, fr.n1, j - i, fr.n2,
                                         ev),
                                  tests));
        gs.push_back(moment_group("E6", DofKind::EdgeMoment, 1, e, false,
                                  "mixed derivative of n1.tau.n1 (" + std::to_string(i) + "," +
                                      std::to_string(j - i) + ")",
                                  jet_of(sandwich_base("", fr.n1, fr.n1), i, fr.n1, j - i, fr.n2,
                                         ev),
                                  tests));
      }
    }
    for (int j = 0; j <= r3.r_e; ++j) {
      std::vector<BaryField> tests =
          along_vectors(eg, scalar_space(eg, k - 1 - j, edge_only(r3.r_v - j)), axes);
      for (int i = 0; i <= j; ++i)
        gs.push_back(moment_group("E7", DofKind::EdgeMoment, 1, e, false,
                                  "mixed derivative of div tau (" + std::to_string(i) + "," +
                                      std::to_string(j - i) + ")",
                                  jet_of(field_base("div"), i, fr.n1, j - i, fr.n2, ev), tests));
    }
  }
  for (int f = 0; f < 4; ++f) {
    const auto& fv = detail::local_subsets(2)[static_cast<std::size_t>(f)];
    GeomPtr fg = sub_geom(host, fv);
    FaceFrame fr = face_frame_of(host, f);
    const Mat3 P = proj_plane(fr.n);
    {
      TraceFn tr = [P, n = fr.n, fv](PreCache& pc) {
        return restrict_field(mat_apply(P, matvec(pc.get(""), n)), fv);
      };
      gs.push_back(moment_group("F1", DofKind::FaceMoment, 2, f, false,
                                "tangential normal-trace moment", tr,
                                quotient_plus(face_div_bubble(fg, k, {r2.r_v, r2.r_e, -1}),
                                              kernel_space("RM_f", fg).basis)));
    }
    gs.push_back(moment_group("F2", DofKind::FaceMoment, 2, f, false,
                              "normal-normal trace moment",
                              restrict_of(sandwich_base("", fr.n, fr.n), fv),
                              quotient_plus(scalar_space(fg, k, plus(r2)),
                                            kernel_space("P1", fg).basis)));
    if (r2.r_f >= 0) {
      std::vector<BaryField> pats;
      for (const Mat3& m : s_face_plane(fr))
        pats.push_back(constant_matrix_field(TensorClass::M, fg, m));
      for (int j = 0; j <= r2.r_f; ++j) {
        TraceFn base = [P](PreCache& pc) { return left_mul(P, right_mul(pc.get(""), P)); };
        gs.push_back(moment_group("F2t", DofKind::FaceMoment, 2, f, false,
                                  "tangential-tangential block, normal derivative order " +
                                      std::to_string(j),
                                  jet_of(base, j, fr.n, 0, fr.n, fv),
                                  tensorize(scalar_space(fg, k - j, ominus(r2, j)), pats)));
      }
    }
    for (int j = 0; j <= r3.r_f; ++j)
      gs.push_back(moment_group("F5", DofKind::FaceMoment, 2, f, false,
                                "normal derivative of div tau, order " + std::to_string(j),
                                jet_of(field_base("div"), j, fr.n, 0, fr.n, fv),
                                along_vectors(fg,
                                              scalar_space(fg, k - 1 - j, ominus(r3, j)), axes)));
  }
  gs.push_back(moment_group("T1", DofKind::VolumeMoment, 3, 0, false,
                            "div moment modulo rigid motions", field_base("div"),
                            moment_kernel(class_space(host, k - 1, r3, TensorClass::R3, "plain"),
                                          kernel_space("RM", host).basis)));
  gs.push_back(moment_group("T2", DofKind::VolumeMoment, 3, 0, false,
                            "moment against divergence-free div-bubble", field_base(""),
                            kernel_intersect(class_space(host, k, r2, TensorClass::S, "div"),
                                             "div")));
  return gs;
}

/// H(divdiv) symmetric-matrix element groups.  plus=true keeps the
/// tangential normal-trace moments shared (normal-trace continuous space);
/// plus=false replaces them with a trailing local group and uses the
/// second-order trace for the always-present face divergence moment.
inline std::vector<DofGroup> divdiv_groups(const GeomPtr& host, const SmoothnessVector& r, int k,
                                           bool plus_variant) {
  if (r.r_f >= 1) return scalar_product_groups(host, r, k, TensorClass::S);
  std::vector<DofGroup> gs;
  std::vector<BaryField> spat = pattern_fields(host, TensorClass::S);
  for (int v = 0; v < 4; ++v)
    for (int j = 0; j <= r.r_v; ++j)
      gs.push_back(point_jet_group("V", host, v, j, "", spat,
                                   "order-" + std::to_string(j) + " jet of the field"));
  for (int e = 0; e < 6; ++e) {
    const auto& ev = detail::local_subsets(1)[static_cast<std::size_t>(e)];
    GeomPtr eg = sub_geom(host, ev);
    EdgeFrame fr = edge_frame_of(host, e);
    if (r.r_e >= 0) {
      std::vector<BaryField> pats = pattern_fields(eg, TensorClass::S);
      for (int j = 0; j <= r.r_e; ++j) {
        std::vector<BaryField> tests =
            plus_variant
                ? tensorize(scalar_space(eg, k - j, edge_only(r.r_v - j)), pats)
                : tensorize(full_poly_space(eg, k - 2 * (r.r_v + 1) + j), pats);
        for (int i = 0; i <= j; ++i)
          gs.push_back(moment_group("E1", DofKind::EdgeMoment, 1, e, false,
                                    "mixed derivative (" + std::to_string(i) + "," +
                                        std::to_string(j - i) + ") moment",
                                    jet_of(field_base(""), i, fr.n1, j - i, fr.n2, ev), tests));
      }
    } else {
      std::vector<BaryField> tests = scalar_space(eg, k, edge_only(r.r_v));
      const std::pair<Vec3, Vec3> nn[3] = {{fr.n1, fr.n1}, {fr.n1, fr.n2}, {fr.n2, fr.n2}};
      for (const auto& [a, b] : nn)
        gs.push_back(moment_group("E2", DofKind::EdgeMoment, 1, e, false,
                                  "normal-normal component moment",
                                  restrict_of(sandwich_base("", a, b), ev), tests));
    }
  }
  std::vector<DofGroup> local_tail;
  for (int f = 0; f < 4; ++f) {
    const auto& fv = detail::local_subsets(2)[static_cast<std::size_t>(f)];
    GeomPtr fg = sub_geom(host, fv);
    FaceFrame fr = face_frame_of(host, f);
    const Mat3 P = proj_plane(fr.n);
    if (r.r_f == 0) {
      std::vector<BaryField> pats = pattern_fields(fg, TensorClass::S);
      gs.push_back(moment_group("F1", DofKind::FaceMoment, 2, f, false,
                                "full trace moment", restrict_of(field_base(""), fv),
                                tensorize(scalar_space(fg, k, {r.r_v, r.r_e, -1}), pats)));
    } else {
      TraceFn tr = [P, n = fr.n, fv](PreCache& pc) {
        return restrict_field(mat_apply(P, matvec(pc.get(""), n)), fv);
      };
      if (plus_variant) {
        gs.push_back(moment_group("F2", DofKind::FaceMoment, 2, f, false,
                                  "tangential normal-trace moment", tr,
                                  quotient_plus(face_div_bubble(fg, k, {r.r_v, r.r_e, -1}),
                                                kernel_space("RM_f", fg).basis)));
      } else {
        local_tail.push_back(moment_group("F2", DofKind::FaceMoment, 2, f, true,
                                          "tangential normal-trace moment (local)", tr,
                                          face_div_bubble(fg, k, {r.r_v, r.r_e, -1})));
      }
      gs.push_back(moment_group(
          "F22", DofKind::FaceMoment, 2, f, false, "normal-normal trace moment",
          restrict_of(sandwich_base("", fr.n, fr.n), fv),
          plus_variant
              ? quotient_plus(scalar_space(fg, k, plus(r)), kernel_space("P1", fg).basis)
              : scalar_space(fg, k, plus(r))));
    }
    {
      std::vector<BaryField> tests = scalar_space(fg, k - 1, ominus(r, 1));
      TraceFn tr;
      if (plus_variant) {
        tr = restrict_of(dot_base("div", fr.n), fv);
      } else {
        tr = [P, n = fr.n, fv](PreCache& pc) {
          BaryField a = restrict_field(dot_const(pc.get("div"), n), fv);
          BaryField w = restrict_field(mat_apply(P, matvec(pc.get(""), n)), fv);
          return a + apply_diffop("div_f", w);
        };
      }
      gs.push_back(moment_group("F3", DofKind::FaceMoment, 2, f, false,
                                plus_variant ? "normal component of div moment"
                                             : "second-order normal trace moment",
                                std::move(tr), std::move(tests)));
    }
  }
  gs.push_back(moment_group("T1", DofKind::VolumeMoment, 3, 0, false,
                            "div moment modulo rigid motions", field_base("div"),
                            moment_kernel(class_space(host, k - 1, ominus(r, 1),
                                                      TensorClass::R3, "div"),
                                          kernel_space("RM", host).basis)));
  gs.push_back(moment_group("T2", DofKind::VolumeMoment, 3, 0, false,
                            "moment against divergence-free div-bubble", field_base(""),
                            kernel_intersect(class_space(host, k, r, TensorClass::S, "div"),
                                             "div")));
  for (DofGroup& g : local_tail) gs.push_back(std::move(g));
  return gs;
}

/// H(curl) symmetric-matrix element.
inline std::vector<DofGroup> curlS_groups(const GeomPtr& host, const SmoothnessVector& r, int k) {
  std::vector<DofGroup> gs;
  std::vector<BaryField> spat = pattern_fields(host, TensorClass::S);
  for (int v = 0; v < 4; ++v)
    for (int j = 0; j <= r.r_v; ++j)
      gs.push_back(point_jet_group("V", host, v, j, "", spat,
                                   "order-" + std::to_string(j) + " jet of the field"));
  if (r.r_e >= 0) {
    for (int e = 0; e < 6; ++e) {
      const auto& ev = detail::local_subsets(1)[static_cast<std::size_t>(e)];
      GeomPtr eg = sub_geom(host, ev);
      EdgeFrame fr = edge_frame_of(host, e);
      std::vector<BaryField> pats = pattern_fields(eg, TensorClass::S);
      for (int j = 0; j <= r.r_e; ++j) {
        std::vector<BaryField> tests =
            tensorize(scalar_space(eg, k - j, edge_only(r.r_v - j)), pats);
        for (int i = 0; i <= j; ++i)
          gs.push_back(moment_group("E1", DofKind::EdgeMoment, 1, e, false,
                                    "mixed derivative (" + std::to_string(i) + "," +
                                        std::to_string(j - i) + ") moment",
                                    jet_of(field_base(""), i, fr.n1, j - i, fr.n2, ev), tests));
      }
    }
  }
  for (int f = 0; f < 4; ++f) {
    const auto& fv = detail::local_subsets(2)[static_cast<std::size_t>(f)];
    GeomPtr fg = sub_geom(host, fv);
    FaceFrame fr = face_frame_of(host, f);
    const Mat3 P = proj_plane(fr.n);
    const Mat3 N = mskw(fr.n);
    {
      std::vector<BaryField> pats;
      for (const Mat3& m : s_face_plane(fr))
        pats.push_back(constant_matrix_field(TensorClass::M, fg, m));
      TraceFn tr = [N, fv](PreCache& pc) {
        return restrict_field(left_mul(N, right_mul(pc.get(""), N)), fv);
      };
      gs.push_back(moment_group("F1", DofKind::FaceMoment, 2, f, false,
                                "tangential-tangential rotated trace moment", std::move(tr),
                                tensorize(scalar_space(fg, k, {r.r_v, r.r_e, -1}), pats)));
    }
    {
      TraceFn tr = [P, n = fr.n, fv](PreCache& pc) {
        return restrict_field(mat_apply(P, matvec(transpose_field(pc.get("")), n)), fv);
      };
      gs.push_back(moment_group("F2", DofKind::FaceMoment, 2, f, false,
                                "normal-row tangential moment", std::move(tr),
                                along_vectors(fg, scalar_space(fg, k, {r.r_v, r.r_e, -1}),
                                              {fr.t1, fr.t2})));
    }
  }
  gs.push_back(moment_group("T", DofKind::VolumeMoment, 3, 0, false,
                            "interior curl-bubble moment", field_base(""),
                            class_space(host, k, r, TensorClass::S, "curl")));
  return gs;
}

}  // namespace eldetail

// ---------------------------------------------------------------------------
// Interior bubbles of the H(divdiv) elements
// ---------------------------------------------------------------------------

/// Shape functions of P_k(T;S) on which every non-interior (and non-local)
/// DoF of the H(divdiv) element vanishes.  plus=true uses the normal-trace
/// continuous layout; plus=false omits the local tangential trace group,
/// giving the larger bubble space.
inline std::vector<BaryField> divdiv_bubble_space(const GeomPtr& host, int k,
                                                  const SmoothnessVector& r, bool plus_variant) {
  static std::map<std::string, std::vector<BaryField>> cache;
  static std::mutex mu;
  std::ostringstream key;
  key << detail::geom_key(host) << "|" << k << "|" << to_string(r) << "|" << plus_variant;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key.str());
    if (it != cache.end()) return it->second;
  }
  std::vector<DofGroup> groups = eldetail::divdiv_groups(host, r, k, plus_variant);
  std::vector<DofGroup> boundary;
  for (DofGroup& g : groups)
    if (g.sub_dim < 3 && !g.local) boundary.push_back(std::move(g));
  std::vector<BaryField> shape = eldetail::make_shape_basis(host, k, TensorClass::S);
  RatMatrix A = eldetail::eval_group_rows(boundary, shape);
  std::vector<BaryField> out = eldetail::lincomb_cols(shape, nullspace(A));
  std::lock_guard<std::mutex> lock(mu);
  return cache.emplace(key.str(), std::move(out)).first->second;
}

namespace eldetail {

/// H(inc) symmetric-matrix element; shape degree k+1.  r2 is the derived
/// smoothness of inc tau.
inline std::vector<DofGroup> incS_groups(const GeomPtr& host, const SmoothnessVector& r1, int k) {
  const SmoothnessVector r0 = r1 + 1;
  const SmoothnessVector r2 = cmax(ominus(r1, 2), SmoothnessVector{0, -1, -1});
  std::vector<DofGroup> gs;
  std::vector<BaryField> spat = pattern_fields(host, TensorClass::S);
  const std::vector<Vec3> axes = {Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{0, 0, 1}};
  for (int v = 0; v < 4; ++v)
    for (int j = 0; j <= r1.r_v; ++j)
      gs.push_back(point_jet_group("V1", host, v, j, "", spat,
                                   "order-" + std::to_string(j) + " jet of the field"));
  if (r1.r_v == 1)
    for (int v = 0; v < 4; ++v)
      gs.push_back(point_jet_group("V2", host, v, 0, "inc", spat, "value of inc at vertex"));
  for (int e = 0; e < 6; ++e) {
    const auto& ev = detail::local_subsets(1)[static_cast<std::size_t>(e)];
    GeomPtr eg = sub_geom(host, ev);
    EdgeFrame fr = edge_frame_of(host, e);
    if (r1.r_e >= 0) {
      std::vector<BaryField> pats = pattern_fields(eg, TensorClass::S);
      for (int j = 0; j <= r1.r_e; ++j) {
        std::vector<BaryField> tests =
            tensorize(scalar_space(eg, k + 1 - j, edge_only(r1.r_v - j)), pats);
        for (int i = 0; i <= j; ++i)
          gs.push_back(moment_group("E1", DofKind::EdgeMoment, 1, e, false,
                                    "mixed derivative (" + std::to_string(i) + "," +
                                        std::to_string(j - i) + ") moment",
                                    jet_of(field_base(""), i, fr.n1, j - i, fr.n2, ev), tests));
      }
    }
    if (r1.r_e == 0) {
      TraceFn tr = [t = fr.t, ev](PreCache& pc) {
        return restrict_field(matvec(transpose_field(pc.get("curl")), t), ev);
      };
      gs.push_back(moment_group("E2", DofKind::EdgeMoment, 1, e, false,
                                "transposed-curl tangential moment", std::move(tr),
                                along_vectors(eg, scalar_space(eg, k, edge_only(r1.r_v - 1)),
                                              axes)));
    }
    if (r2.r_e < 0) {
      std::vector<BaryField> tests = scalar_space(eg, k - 1, edge_only(r2.r_v));
      const std::pair<Vec3, Vec3> nn[3] = {{fr.n1, fr.n1}, {fr.n1, fr.n2}, {fr.n2, fr.n2}};
      for (const auto& [a, b] : nn)
        gs.push_back(moment_group("E3", DofKind::EdgeMoment, 1, e, false,
                                  "normal-normal component of inc moment",
                                  restrict_of(sandwich_base("inc", a, b), ev), tests));
    }
  }
  for (int f = 0; f < 4; ++f) {
    const auto& fv = detail::local_subsets(2)[static_cast<std::size_t>(f)];
    GeomPtr fg = sub_geom(host, fv);
    FaceFrame fr = face_frame_of(host, f);
    const Mat3 P = proj_plane(fr.n);
    const Mat3 N = mskw(fr.n);
    gs.push_back(moment_group(
        "F1", DofKind::FaceMoment, 2, f, false,
        "tangential-tangential trace against surface symmetric curls",
        [N, fv](PreCache& pc) { return restrict_field(left_mul(N, right_mul(pc.get(""), N)), fv); },
        image_space(along_vectors(fg, scalar_space(fg, k + 2, {r0.r_v, r0.r_e, -1}),
                                  {fr.t1, fr.t2}),
                    "symcurl_f")));
    {
      TraceFn tr = [N, P, n = fr.n, fv](PreCache& pc) {
        BaryField m1 =
            restrict_field(right_mul(left_mul(N, transpose_field(pc.get("curl"))), P), fv);
        BaryField w = restrict_field(mat_apply(P, matvec(pc.get(""), n)), fv);
        return m1 + apply_diffop("grad_f", w);
      };
      gs.push_back(moment_group("F2", DofKind::FaceMoment, 2, f, false,
                                "second-order trace against surface hessians", std::move(tr),
                                image_space(scalar_space(fg, k + 2, {r0.r_v, r0.r_e, -1}),
                                            "hess_f")));
    }
    if (r1.r_f == 0)
      gs.push_back(moment_group("F3", DofKind::FaceMoment, 2, f, false, "normal-trace moment",
                                restrict_of(matvec_base("", fr.n), fv),
                                along_vectors(fg, scalar_space(fg, k + 1, {r1.r_v, r1.r_e, -1}),
                                              axes)));
    gs.push_back(moment_group(
        "F4", DofKind::FaceMoment, 2, f, false,
        "tangential part of inc normal-trace, modulo lowest-order face fields",
        [P, n = fr.n, fv](PreCache& pc) {
          return restrict_field(mat_apply(P, matvec(pc.get("inc"), n)), fv);
        },
        moment_kernel(face_div_bubble(fg, k - 1, {r2.r_v, r2.r_e, -1}),
                      kernel_space("RT_f", fg).basis)));
    gs.push_back(moment_group("F5", DofKind::FaceMoment, 2, f, false,
                              "normal-normal part of inc, modulo linears",
                              restrict_of(sandwich_base("inc", fr.n, fr.n), fv),
                              moment_kernel(scalar_space(fg, k - 1, plus(r2)),
                                            kernel_space("P1", fg).basis)));
  }
  gs.push_back(moment_group("T1", DofKind::VolumeMoment, 3, 0, false,
                            "moment against interior symmetric gradients", field_base(""),
                            image_space(class_space(host, k + 2, r0, TensorClass::R3, "plain"),
                                        "def")));
  gs.push_back(moment_group("T2", DofKind::VolumeMoment, 3, 0, false,
                            "inc moment against divergence-free div-bubble", field_base("inc"),
                            kernel_intersect(class_space(host, k - 1, r2, TensorClass::S, "div"),
                                             "div")));
  return gs;
}

/// H(sym curl) traceless-matrix element; shape degree k+1.  r2 is the
/// derived smoothness of sym curl tau.  relaxed=true tags the sym-curl face
/// moment group local instead of shared.
inline std::vector<DofGroup> symcurlT_groups(const GeomPtr& host, const SmoothnessVector& r1,
                                             int k, bool relaxed) {
  const SmoothnessVector r0 = r1 + 1;
  const SmoothnessVector r2 = cmax(ominus(r1, 1), SmoothnessVector{0, -1, -1});
  std::vector<DofGroup> gs;
  std::vector<BaryField> tpat = pattern_fields(host, TensorClass::T);
  std::vector<BaryField> spat = pattern_fields(host, TensorClass::S);
  const std::vector<Vec3> axes = {Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{0, 0, 1}};
  for (int v = 0; v < 4; ++v)
    for (int j = 0; j <= r1.r_v; ++j)
      gs.push_back(point_jet_group("V1", host, v, j, "", tpat,
                                   "order-" + std::to_string(j) + " jet of the field"));
  if (r1.r_v == 0)
    for (int v = 0; v < 4; ++v)
      gs.push_back(point_jet_group("V2", host, v, 0, "symcurl", spat,
                                   "value of sym curl at vertex"));
  for (int e = 0; e < 6; ++e) {
    const auto& ev = detail::local_subsets(1)[static_cast<std::size_t>(e)];
    GeomPtr eg = sub_geom(host, ev);
    EdgeFrame fr = edge_frame_of(host, e);
    if (r1.r_e >= 0) {
      std::vector<BaryField> pats = pattern_fields(eg, TensorClass::T);
      for (int j = 0; j <= r1.r_e; ++j) {
        std::vector<BaryField> tests =
            tensorize(scalar_space(eg, k + 1 - j, edge_only(r1.r_v - j)), pats);
        for (int i = 0; i <= j; ++i)
          gs.push_back(moment_group("E1", DofKind::EdgeMoment, 1, e, false,
                                    "mixed derivative (" + std::to_string(i) + "," +
                                        std::to_string(j - i) + ") moment",
                                    jet_of(field_base(""), i, fr.n1, j - i, fr.n2, ev), tests));
      }
    }
    if (r1.r_e < 0) {
      std::vector<BaryField> tests = scalar_space(eg, k + 1, edge_only(r1.r_v));
      const Vec3 ns[2] = {fr.n1, fr.n2};
      for (const Vec3& ni : ns)
        gs.push_back(moment_group("E2", DofKind::EdgeMoment, 1, e, false,
                                  "normal-tangential component moment",
                                  restrict_of(sandwich_base("", ni, fr.t), ev), tests));
    }
    if (r1.r_e <= 0) {
      // Weighted so that both terms carry the same frame scaling:
      // |n2| |n1| = |t| |n1|^2 against |t|^3 requires rho = |n1|^2/|t|^2.
      const Rat rho = dot(fr.n1, fr.n1) / dot(fr.t, fr.t);
      TraceFn tr = [fr, rho, ev](PreCache& pc) {
        BaryField s1 = sandwich(pc.get("curl"), fr.n2, fr.n1);
        BaryField s2 = dir_deriv(sandwich(pc.get(""), fr.t, fr.t), fr.t);
        return restrict_field(s1 + s2 * rho, ev);
      };
      gs.push_back(moment_group("E3", DofKind::EdgeMoment, 1, e, false,
                                "second-order edge trace moment", std::move(tr),
                                scalar_space(eg, k, edge_only(r1.r_v - 1))));
    }
    if (r2.r_e < 0) {
      std::vector<BaryField> tests = scalar_space(eg, k, edge_only(r2.r_v));
      const std::pair<Vec3, Vec3> nn[3] = {{fr.n1, fr.n1}, {fr.n1, fr.n2}, {fr.n2, fr.n2}};
      for (const auto& [a, b] : nn)
        gs.push_back(moment_group("E4", DofKind::EdgeMoment, 1, e, false,
                                  "normal-normal component of sym curl moment",
                                  restrict_of(sandwich_base("symcurl", a, b), ev), tests));
    }
  }
  for (int f = 0; f < 4; ++f) {
    const auto& fv = detail::local_subsets(2)[static_cast<std::size_t>(f)];
    GeomPtr fg = sub_geom(host, fv);
    FaceFrame fr = face_frame_of(host, f);
    const Mat3 P = proj_plane(fr.n);
    const Mat3 N = mskw(fr.n);
    if (r1.r_f == 0)
      gs.push_back(moment_group("F0", DofKind::FaceMoment, 2, f, false, "normal-trace moment",
                                restrict_of(matvec_base("", fr.n), fv),
                                along_vectors(fg, scalar_space(fg, k + 1, {r1.r_v, r1.r_e, -1}),
                                              axes)));
    {
      TraceFn tr = [n = fr.n, N, fv](PreCache& pc) {
        return restrict_field(vecmat(n, right_mul(pc.get(""), N)), fv);
      };
      gs.push_back(moment_group("F1", DofKind::FaceMoment, 2, f, false,
                                "normal-row rotated trace against surface curls", tr,
                                image_space(scalar_space(fg, k + 2, {r0.r_v, r0.r_e, -1}),
                                            "curl_f")));
      gs.push_back(moment_group(
          "F2", DofKind::FaceMoment, 2, f, false,
          "surface divergence of normal-row rotated trace, zero-mean",
          [n = fr.n, N, fv](PreCache& pc) {
            return apply_diffop("div_f", restrict_field(vecmat(n, right_mul(pc.get(""), N)), fv));
          },
          moment_kernel(scalar_space(fg, k, plus(r2)), {const_one(fg)})));
    }
    gs.push_back(moment_group(
        "F3", DofKind::FaceMoment, 2, f, false,
        "tangential-tangential symmetric rotated trace against surface symmetric curls",
        [P, N, fv](PreCache& pc) {
          return restrict_field(left_mul(P, right_mul(sym_field(right_mul(pc.get(""), N)), P)),
                                fv);
        },
        image_space(along_vectors(fg, scalar_space(fg, k + 2, {r0.r_v, r0.r_e, -1}),
                                  {fr.t1, fr.t2}),
                    "symcurl_f")));
    gs.push_back(moment_group(
        "F4", DofKind::FaceMoment, 2, f, false,
        "second-order surface divergence of symmetric rotated trace, modulo linears",
        [N, fv](PreCache& pc) {
          return apply_diffop("div_f_div_f",
                              restrict_field(sym_field(right_mul(pc.get(""), N)), fv));
        },
        moment_kernel(scalar_space(fg, k - 1, ominus(r2, 1)), kernel_space("P1", fg).basis)));
    gs.push_back(moment_group(
        "F5", DofKind::FaceMoment, 2, f, relaxed,
        std::string("tangential part of sym curl normal-trace") + (relaxed ? " (local)" : ""),
        [P, n = fr.n, fv](PreCache& pc) {
          return restrict_field(mat_apply(P, matvec(pc.get("symcurl"), n)), fv);
        },
        face_div_bubble(fg, k, {r2.r_v, r2.r_e, -1})));
  }
  gs.push_back(moment_group("T1", DofKind::VolumeMoment, 3, 0, false,
                            "moment against interior deviatoric gradients", field_base(""),
                            image_space(class_space(host, k + 2, r0, TensorClass::R3, "plain"),
                                        "devgrad")));
  gs.push_back(moment_group(
      "T2", DofKind::VolumeMoment, 3, 0, false,
      "sym curl moment against divdiv-free interior bubble", field_base("symcurl"),
      kernel_intersect(divdiv_bubble_space(host, k, r2, true), "divdiv")));
  return gs;
}

}  // namespace eldetail

// ---------------------------------------------------------------------------
// Element construction
// ---------------------------------------------------------------------------

inline ElementDef build_element(Family fam, const ElementParams& p, GeomPtr host) {
  if (!host || host->dim != 3)
    throw std::invalid_argument("build_element: host must be a tetrahedron geometry");
  auto need_rs = [&](std::size_t n) {
    if (p.rs.size() != n && !((fam == Family::IncS || fam == Family::SymCurlT ||
                               fam == Family::SymCurlT_relaxed) &&
                              p.rs.size() == 2))
      throw std::invalid_argument("build_element: " + family_name(fam) + " expects " +
                                  std::to_string(n) + " smoothness vector(s)");
  };
  for (const SmoothnessVector& r : p.rs)
    if (!is_valid(r))
      throw std::invalid_argument("build_element: invalid smoothness vector " + to_string(r));

  ElementDef e;
  e.family = fam;
  e.params = p;
  e.host = host;
  const int k = p.k;

  auto set_hyp = [&](bool ok, const std::string& note) {
    e.hypothesis_ok = ok;
    if (!ok) e.hypothesis_note = note;
  };
  auto bound = [&](bool ok, const std::string& note) {
    if (e.hypothesis_ok && !ok) set_hyp(false, note);
  };

  switch (fam) {
    case Family::ScalarCr:
    case Family::TensorProduct: {
      need_rs(1);
      const SmoothnessVector r = p.rs[0];
      const TensorClass cls = (fam == Family::ScalarCr) ? TensorClass::R : p.cls;
      bound(k >= std::max(2 * r.r_v + 1, 0), "k >= max(2 r_v + 1, 0)");
      e.shape_deg = k;
      e.shape_cls = cls;
      e.groups = eldetail::scalar_product_groups(host, r, k, cls);
      break;
    }
    case Family::VecDiv: {
      need_rs(2);
      const SmoothnessVector r2 = p.rs[0], r3 = p.rs[1];
      if (!geq(r3, ominus(r2, 1)))
        throw std::invalid_argument("build_element: VecDiv requires r3 >= r2 (-) 1");
      bound(k >= std::max({2 * r2.r_v + 1, 2 * r3.r_v + 2, 1}),
            "k >= max(2 r2_v + 1, 2 r3_v + 2, 1)");
      e.shape_deg = k;
      e.shape_cls = TensorClass::R3;
      e.groups = eldetail::vecdiv_groups(host, r2, r3, k);
      break;
    }
    case Family::VecCurl: {
      need_rs(2);
      const SmoothnessVector r1 = p.rs[0], r2 = p.rs[1];
      if (!geq(r2, ominus(r1, 1)))
        throw std::invalid_argument("build_element: VecCurl requires r2 >= r1 (-) 1");
      bound(k >= std::max({2 * r1.r_v + 1, 2 * r2.r_v + 1, 0}),
            "k >= max(2 r1_v + 1, 2 r2_v + 1, 0)");
      e.shape_deg = k + 1;
      e.shape_cls = TensorClass::R3;
      e.groups = eldetail::veccurl_groups(host, r1, r2, k);
      break;
    }
    case Family::DivT:
    case Family::DivS: {
      need_rs(1);
      const SmoothnessVector r = p.rs[0];
      const TensorClass cls = (fam == Family::DivT) ? TensorClass::T : TensorClass::S;
      e.shape_deg = k;
      e.shape_cls = cls;
      if (r.r_f >= 0) {
        bound(k >= std::max(2 * r.r_v + 1, 0), "k >= max(2 r_v + 1, 0)");
        e.groups = eldetail::scalar_product_groups(host, r, k, cls);
      } else {
        bound(r.r_v >= 0, "r_v >= 0");
        bound(k >= 2 * r.r_v + 1, "k >= 2 r_v + 1");
        e.groups = (fam == Family::DivT) ? eldetail::divT_groups(host, r, k)
                                         : eldetail::divS_groups(host, r, k);
      }
      break;
    }
    case Family::DivS_HuZhang: {
      need_rs(1);
      const SmoothnessVector r = p.rs[0];
      bound(r.r_e == -1, "r_e == -1");
      bound(r.r_v >= 0, "r_v >= 0");
      bound(k >= 2 * r.r_v + 1, "k >= 2 r_v + 1");
      e.shape_deg = k;
      e.shape_cls = TensorClass::S;
      e.groups = eldetail::divS_huzhang_groups(host, r, k);
      break;
    }
    case Family::DivS_constrained: {
      need_rs(2);
      const SmoothnessVector r2 = p.rs[0], r3 = p.rs[1];
      if (!geq(r3, ominus(r2, 1)))
        throw std::invalid_argument("build_element: DivS_constrained requires r3 >= r2 (-) 1");
      bound(r2.r_v >= 0, "r2_v >= 0");
      bound(k >= std::max(2 * r2.r_v + 1, 2 * r3.r_v + 2),
            "k >= max(2 r2_v + 1, 2 r3_v + 2)");
      bound(is_divX_stable(r2, k, TensorClass::S), "(r2, r2 (-) 1, k) div-stable for S");
      e.shape_deg = k;
      e.shape_cls = TensorClass::S;
      e.groups = eldetail::divS_constrained_groups(host, r2, r3, k);
      break;
    }
    case Family::DivDivPlusS:
    case Family::DivDivS: {
      need_rs(1);
      const SmoothnessVector r = p.rs[0];
      e.shape_deg = k;
      e.shape_cls = TensorClass::S;
      if (r.r_f >= 1) {
        bound(k >= std::max(2 * r.r_v + 1, 0), "k >= max(2 r_v + 1, 0)");
      } else {
        bound(r.r_v >= 0, "r_v >= 0");
        bound(k >= 2 * r.r_v + 1, "k >= 2 r_v + 1");
      }
      e.groups = eldetail::divdiv_groups(host, r, k, fam == Family::DivDivPlusS);
      break;
    }
    case Family::CurlS: {
      need_rs(1);
      const SmoothnessVector r = p.rs[0];
      e.shape_deg = k;
      e.shape_cls = TensorClass::S;
      if (r.r_f >= 0) {
        bound(k >= std::max(2 * r.r_v + 1, 0), "k >= max(2 r_v + 1, 0)");
        e.groups = eldetail::scalar_product_groups(host, r, k, TensorClass::S);
      } else {
        bound(r.r_e >= 0, "r_e >= 0");
        bound(k >= 2 * r.r_v + 1, "k >= 2 r_v + 1");
        e.groups = eldetail::curlS_groups(host, r, k);
      }
      break;
    }
    case Family::IncS: {
      need_rs(1);
      const SmoothnessVector r1 = p.rs[0];
      const SmoothnessVector r2d =
          eldetail::cmax(ominus(r1, 2), SmoothnessVector{0, -1, -1});
      if (p.rs.size() == 2 && !(p.rs[1] == r2d))
        throw std::invalid_argument("build_element: IncS derived r2 is " + to_string(r2d));
      e.shape_deg = k + 1;
      e.shape_cls = TensorClass::S;
      if (r1.r_f >= 1) {
        bound(k + 1 >= std::max(2 * r1.r_v + 1, 0), "k+1 >= max(2 r1_v + 1, 0)");
        e.groups = eldetail::scalar_product_groups(host, r1, k + 1, TensorClass::S);
      } else {
        bound(r1.r_v >= 1, "r1_v >= 1");
        bound(r1.r_e >= 0, "r1_e >= 0");
        bound(k >= 2 * r1.r_v + 1, "k >= 2 r1_v + 1");
        e.groups = eldetail::incS_groups(host, r1, k);
      }
      break;
    }
    case Family::SymCurlT:
    case Family::SymCurlT_relaxed: {
      need_rs(1);
      const SmoothnessVector r1 = p.rs[0];
      const SmoothnessVector r2d =
          eldetail::cmax(ominus(r1, 1), SmoothnessVector{0, -1, -1});
      if (p.rs.size() == 2 && !(p.rs[1] == r2d))
        throw std::invalid_argument("build_element: SymCurlT derived r2 is " + to_string(r2d));
      e.shape_deg = k + 1;
      e.shape_cls = TensorClass::T;
      if (r1.r_f >= 1) {
        bound(k + 1 >= std::max(2 * r1.r_v + 1, 0), "k+1 >= max(2 r1_v + 1, 0)");
        e.groups = eldetail::scalar_product_groups(host, r1, k + 1, TensorClass::T);
      } else {
        bound(r1.r_v >= 0, "r1_v >= 0");
        bound(k >= 2 * r1.r_v + 1, "k >= 2 r1_v + 1");
        e.groups =
            eldetail::symcurlT_groups(host, r1, k, fam == Family::SymCurlT_relaxed);
      }
      break;
    }
  }
  e.shape_basis = eldetail::make_shape_basis(host, e.shape_deg, e.shape_cls);
  return e;
}

// ---------------------------------------------------------------------------
// DoF matrix, unisolvence, dual basis
// ---------------------------------------------------------------------------

/// Exact DoF matrix: rows are functionals in group order, columns shape
/// basis functions.
inline RatMatrix dof_matrix(const ElementDef& e, unsigned jobs = 0) {
  return eldetail::eval_group_rows(e.groups, e.shape_basis, jobs);
}

inline UnisolvenceReport check_unisolvence(const ElementDef& e, bool exact = true,
                                           unsigned jobs = 0) {
  UnisolvenceReport rep;
  rep.dof_count = e.dof_count();
  rep.shape_dim = e.shape_dim();
  rep.hypothesis_ok = e.hypothesis_ok;
  rep.counts_by_dim = e.counts_by_dim();
  RatMatrix A = dof_matrix(e, jobs);
  rep.exact = exact;
  rep.matrix_rank = static_cast<int>(exact ? rank_exact(A, jobs) : rank_float(A));
  rep.unisolvent =
      rep.dof_count == rep.shape_dim && rep.matrix_rank == rep.shape_dim && rep.shape_dim > 0;
  return rep;
}

/// Fields b_i with DoF_j(b_i) = delta_ij (throws if the DoF matrix is not
/// square and invertible).
inline std::vector<BaryField> dual_basis(const ElementDef& e, unsigned jobs = 0) {
  RatMatrix A = dof_matrix(e, jobs);
  if (A.rows != A.cols) throw std::runtime_error("dual_basis: DoF matrix is not square");
  std::optional<RatMatrix> inv = inverse(A);
  if (!inv) throw std::runtime_error("dual_basis: DoF matrix is singular");
  return eldetail::lincomb_cols(e.shape_basis, *inv);
}

/// Machine-readable one-line catalogue entry.
inline std::string element_summary(const ElementDef& e) {
  std::ostringstream os;
  os << "family=" << family_name(e.family);
  os << " rs=";
  for (std::size_t i = 0; i < e.params.rs.size(); ++i)
    os << (i ? ";" : "") << to_string(e.params.rs[i]);
  os << " k=" << e.params.k;
  if (e.family == Family::TensorProduct) os << " cls=" << class_name(e.params.cls);
  const auto c = e.counts_by_dim();
  os << " shape_deg=" << e.shape_deg << " shape_cls=" << class_name(e.shape_cls)
     << " shape_dim=" << e.shape_dim() << " dofs=" << e.dof_count() << " V=" << c[0]
     << " E=" << c[1] << " F=" << c[2] << " T=" << c[3]
     << " hyp=" << (e.hypothesis_ok ? "ok" : ("violated:" + e.hypothesis_note));
  return os.str();
}

// ---------------------------------------------------------------------------
// Named traces
// ---------------------------------------------------------------------------

/// Surface traces of matrix fields on a face sub-simplex of the host.
/// Ids: "tn" (tau n), "txn" (tau x n, rows tau_i x n), "n_txn" (n . (tau x n)),
/// "nxtxn" (n x tau x n), "ntPif" (Pi_f tau^T n), "PifTn" (Pi_f (tau n)),
/// "sym_txn" (sym(tau x n)), "Pif_sym_txn_Pif", "tr1_inc" (= nxtxn),
/// "tr2_inc" (n x (curl tau)^T Pi_f + grad_f(Pi_f tau n)),
/// "tr2_divdiv" (n . div tau + div_f(Pi_f tau n)).
inline BaryField trace(const std::string& id, const BaryField& f,
                       const std::vector<int>& sub_vars) {
  GeomPtr gsub = std::make_shared<const SimplexGeometry>(f.geom->sub(sub_vars));
  if (gsub->dim != 2) throw std::invalid_argument("trace: face sub-simplex required");
  const Vec3 n = gsub->normal();
  const Mat3 N = mskw(n);
  const Mat3 P = proj_plane(n);
  auto rs = [&](const BaryField& g) { return restrict_field(g, sub_vars); };
  if (id == "tn") return rs(matvec(f, n));
  if (id == "txn") return rs(cross_right(f, n));
  if (id == "n_txn") return rs(vecmat(n, cross_right(f, n)));
  if (id == "nxtxn" || id == "tr1_inc") return rs(left_mul(N, right_mul(f, N)));
  if (id == "ntPif") return rs(mat_apply(P, matvec(transpose_field(f), n)));
  if (id == "PifTn") return rs(mat_apply(P, matvec(f, n)));
  if (id == "sym_txn") return rs(sym_field(cross_right(f, n)));
  if (id == "Pif_sym_txn_Pif") return rs(left_mul(P, right_mul(sym_field(cross_right(f, n)), P)));
  if (id == "tr2_inc") {
    BaryField m1 = rs(right_mul(left_mul(N, transpose_field(apply_diffop("curl", f))), P));
    BaryField w = rs(mat_apply(P, matvec(f, n)));
    return m1 + apply_diffop("grad_f", w);
  }
  if (id == "tr2_divdiv") {
    BaryField a = rs(dot_const(apply_diffop("div", f), n));
    BaryField w = rs(mat_apply(P, matvec(f, n)));
    return a + apply_diffop("div_f", w);
  }
  throw std::invalid_argument("trace: unknown id " + id);
}

}  // namespace tetfec

#endif
