#ifndef TETFEC_BUBBLES_HPP
#define TETFEC_BUBBLES_HPP

/// Bubble polynomial spaces on edges, triangles and tetrahedra, constructed
/// uniformly as exact kernels of jet-vanishing constraint systems:
///
///   plain  scalar/tensor bubbles: all derivative jets up to order r_v at
///          vertices, r_e on edges, r_f on faces vanish (tensor classes are
///          scalar bubbles tensored with a class basis);
///   curl   vector fields in the plain bubble with vanishing tangential
///          trace v x n on the boundary; for class S the face blocks
///          B_k(f;r) (x) {n (x) n} are added instead (tangential traces see
///          everything but n (x) n);
///   div    vector fields with vanishing normal trace v . n; for classes
///          S and T built as the direct sum of the plain bubble at r_+ with
///          edge/face blocks tensored by the tangential planes;
///   L2     scalar bubbles with zero mean.
///
/// Jet constraints on a sub-simplex reduce to pure normal-derivative
/// constraints (tangential derivatives of vanishing restrictions vanish
/// identically), which keeps the constraint systems minimal.

#include <map>
#include <mutex>
#include <sstream>
#include <string>
#include <vector>

#include "tetfec/field.hpp"
#include "tetfec/geometry.hpp"
#include "tetfec/linalg.hpp"
#include "tetfec/mesh.hpp"
#include "tetfec/smoothness.hpp"
#include "tetfec/tensoralg.hpp"

namespace tetfec {

struct SpaceBasis {
  GeomPtr host;
  int k = 0;
  TensorClass cls = TensorClass::R;
  std::string variant;
  std::vector<BaryField> basis;
  /// Constraint rows over the coefficient layout (empty for direct-sum
  /// constructions, which are assembled from blocks instead).
  RatMatrix constraints;

  int dim() const { return static_cast<int>(basis.size()); }
};

namespace detail {

/// One monomial of the degree-k basis as a polynomial.
inline BaryPoly unit_mono(int dim, int k, std::size_t idx) {
  BaryPoly p(dim, k);
  p.c[idx] = 1;
  return p;
}

/// Append rows forcing deriv-jet `q` of every monomial to vanish identically
/// on the sub-simplex spanned by host_vars (one row per coefficient of the
/// restriction).
inline void append_restriction_rows(std::vector<std::vector<Rat>>& rows, int dim, int k,
                                    const std::vector<BaryPoly>& derived,
                                    const std::vector<int>& host_vars) {
  if (derived.empty()) return;
  const int sub_dim = static_cast<int>(host_vars.size()) - 1;
  const int ncoef = mono_count(sub_dim, derived.front().degree);
  const std::size_t M = derived.size();
  std::vector<std::vector<Rat>> block(ncoef, std::vector<Rat>(M, Rat(0)));
  for (std::size_t m = 0; m < M; ++m) {
    BaryPoly rp = derived[m].restricted(host_vars);
    for (int c = 0; c < ncoef; ++c) block[c][m] = rp.c[c];
  }
  for (auto& row : block) rows.push_back(std::move(row));
  (void)dim;
  (void)k;
}

/// Constraint rows of the scalar bubble space B_k(host; r).
inline RatMatrix scalar_bubble_rows(const GeomPtr& g, int k, const SmoothnessVector& r) {
  const int dim = g->dim;
  const int M = mono_count(dim, k);
  std::vector<BaryPoly> monos;
  for (int m = 0; m < M; ++m) monos.push_back(unit_mono(dim, k, m));
  std::vector<std::vector<Rat>> rows;

  // Vertex jets: directional-derivative words along spanning tangents, one
  // word per nondecreasing index sequence (differentiation commutes).  Each
  // level j contributes one row per (word, vertex).
  std::vector<Vec3> dirs;
  for (int i = 1; i <= dim; ++i) dirs.push_back(g->verts[i] - g->verts[0]);
  auto emit_vertex_rows = [&](const std::vector<BaryPoly>& der) {
    for (int v = 0; v <= dim; ++v) {
      std::vector<Rat> pt(dim + 1, Rat(0));
      pt[v] = 1;
      std::vector<Rat> row(M);
      for (int m = 0; m < M; ++m) row[m] = der[m].eval(pt);
      rows.push_back(std::move(row));
    }
  };
  if (r.r_v >= 0) {
    // level[w] = (last direction index, derivatives of all monomials).
    std::vector<std::pair<int, std::vector<BaryPoly>>> level = {{0, monos}};
    emit_vertex_rows(monos);
    for (int j = 1; j <= r.r_v; ++j) {
      std::vector<std::pair<int, std::vector<BaryPoly>>> next;
      for (const auto& [start, polys] : level)
        for (int d = start; d < dim; ++d) {
          std::vector<BaryPoly> der;
          der.reserve(M);
          for (const BaryPoly& p : polys) der.push_back(dir_deriv(p, dirs[d], *g));
          emit_vertex_rows(der);
          next.emplace_back(d, std::move(der));
        }
      level = std::move(next);
    }
  }

  // Edge constraints (face host: in-plane normal; tet host: two normals).
  if (dim >= 2 && r.r_e >= 0) {
    for (const auto& ev : local_subsets(1)) {
      if (ev.back() > dim) continue;
      Vec3 te = g->verts[ev[1]] - g->verts[ev[0]];
      std::vector<Vec3> normals;
      if (dim == 2) {
        normals = {cross(g->normal(), te)};
      } else {
        EdgeFrame fr = build_edge_frame(g->verts[ev[0]], g->verts[ev[1]]);
        normals = {fr.n1, fr.n2};
      }
      // Pure normal words of length j <= r_e.
      for (int j = 0; j <= r.r_e; ++j) {
        std::vector<std::vector<int>> combos;
        if (normals.size() == 1) {
          combos = {std::vector<int>(j, 0)};
        } else {
          for (int i = 0; i <= j; ++i) {
            std::vector<int> w(i, 0);
            w.resize(j, 1);
            combos.push_back(w);
          }
        }
        for (const auto& word : combos) {
          std::vector<BaryPoly> der = monos;
          for (int d : word)
            for (auto& p : der) p = dir_deriv(p, normals[d], *g);
          append_restriction_rows(rows, dim, k, der, ev);
        }
      }
    }
  }

  // Face constraints (tet host only): normal-derivative jets.
  if (dim == 3 && r.r_f >= 0) {
    for (const auto& fv : local_subsets(2)) {
      std::vector<Vec3> pts;
      for (int i : fv) pts.push_back(g->verts[i]);
      Vec3 n = cross(pts[1] - pts[0], pts[2] - pts[0]);
      std::vector<BaryPoly> der = monos;
      for (int j = 0; j <= r.r_f; ++j) {
        append_restriction_rows(rows, dim, k, der, fv);
        if (j < r.r_f)
          for (auto& p : der) p = dir_deriv(p, n, *g);
      }
    }
  }

  RatMatrix A(static_cast<int>(rows.size()), M);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (int j = 0; j < M; ++j) A.at(static_cast<int>(i), j) = rows[i][j];
  return A;
}

/// Coefficient vector of a field: storage-component blocks of monomial
/// coefficients, degree raised to k.
inline std::vector<Rat> field_coeffs(const BaryField& f, int k) {
  const int M = mono_count(f.geom->dim, k);
  std::vector<Rat> out;
  out.reserve(f.comp.size() * M);
  for (const BaryPoly& p : f.comp) {
    BaryPoly q = p.raised_to(k);
    out.insert(out.end(), q.c.begin(), q.c.end());
  }
  return out;
}

inline int stacked_rank(const std::vector<BaryField>& fields, int k) {
  if (fields.empty()) return 0;
  std::vector<std::vector<Rat>> rows;
  for (const BaryField& f : fields) rows.push_back(field_coeffs(f, k));
  RatMatrix A(static_cast<int>(rows.size()), static_cast<int>(rows[0].size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      A.at(static_cast<int>(i), static_cast<int>(j)) = rows[i][j];
  return rank_exact(A);
}

}  // namespace detail

/// Scalar bubble basis from the kernel of the jet constraints.
inline SpaceBasis scalar_bubble_space(GeomPtr host, int k, SmoothnessVector r) {
  SpaceBasis sb{host, k, TensorClass::R, "plain", {}, {}};
  if (k < 0) return sb;
  sb.constraints = detail::scalar_bubble_rows(host, k, r);
  RatMatrix N = nullspace(sb.constraints);
  for (int j = 0; j < N.cols; ++j) {
    BaryPoly p(host->dim, k);
    for (int i = 0; i < N.rows; ++i) p.c[static_cast<std::size_t>(i)] = N.at(i, j);
    sb.basis.push_back(scalar_field(host, std::move(p)));
  }
  return sb;
}

SpaceBasis bubble_space(GeomPtr host, int k, SmoothnessVector r, TensorClass cls,
                        const std::string& variant);

namespace detail {

inline SpaceBasis bubble_space_uncached(GeomPtr host, int k, SmoothnessVector r, TensorClass cls,
                                        const std::string& variant) {
  const int dim = host->dim;
  if (variant == "plain" || variant == "L2") {
    if (variant == "L2" && cls != TensorClass::R)
      throw std::invalid_argument("bubble_space: L2 variant is scalar");
    SpaceBasis scalar = scalar_bubble_space(host, k, r);
    if (variant == "L2") {
      // Add the zero-mean row over the scalar bubble coefficients.
      std::vector<BaryField> out;
      const std::size_t m = scalar.basis.size();
      if (m > 0) {
        RatMatrix A(1, static_cast<int>(m));
        for (std::size_t i = 0; i < m; ++i)
          A.at(0, static_cast<int>(i)) = scalar.basis[i].comp[0].integral_normalized();
        RatMatrix N = nullspace(A);
        for (int j = 0; j < N.cols; ++j) {
          BaryField acc = scalar.basis[0] * N.at(0, j);
          for (std::size_t i = 1; i < m; ++i)
            acc = acc + scalar.basis[i] * N.at(static_cast<int>(i), j);
          out.push_back(std::move(acc));
        }
      }
      SpaceBasis sb{host, k, cls, variant, std::move(out), {}};
      return sb;
    }
    if (cls == TensorClass::R) return scalar;
    SpaceBasis sb{host, k, cls, variant, {}, scalar.constraints};
    if (cls == TensorClass::R3) {
      for (int c = 0; c < 3; ++c)
        for (const BaryField& b : scalar.basis) {
          BaryField f(TensorClass::R3, host, 0);
          f.comp[c] = b.comp[0];
          sb.basis.push_back(std::move(f));
        }
      return sb;
    }
    for (const Mat3& E : class_basis(cls))
      for (const BaryField& b : scalar.basis) {
        BaryField f(cls, host, 0);
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j) f.at(i, j) = b.comp[0] * E(i, j);
        sb.basis.push_back(std::move(f));
      }
    return sb;
  }

  if (cls == TensorClass::R3 && (variant == "div" || variant == "curl")) {
    if (dim != 3) throw std::invalid_argument("bubble_space: vector traces need a tet host");
    SpaceBasis scalar = scalar_bubble_space(host, k, r);
    const std::size_t m = scalar.basis.size();
    SpaceBasis sb{host, k, cls, variant, {}, {}};
    if (m == 0) return sb;
    auto candidate = [&](std::size_t i, int c) {
      BaryField f(TensorClass::R3, host, 0);
      f.comp[c] = scalar.basis[i].comp[0];
      return f;
    };
    if (r.r_f >= 0) {
      for (int c = 0; c < 3; ++c)
        for (std::size_t i = 0; i < m; ++i) sb.basis.push_back(candidate(i, c));
      return sb;
    }
    // Trace rows: for each face, v.n (div) or the three components of
    // v x n (curl) restricted to the face must vanish.
    std::vector<std::vector<Rat>> rows;
    const std::size_t ncand = 3 * m;
    std::vector<BaryField> cands;
    for (int c = 0; c < 3; ++c)
      for (std::size_t i = 0; i < m; ++i) cands.push_back(candidate(i, c));
    for (const auto& fv : local_subsets(2)) {
      std::vector<Vec3> pts;
      for (int i : fv) pts.push_back(host->verts[i]);
      Vec3 n = cross(pts[1] - pts[0], pts[2] - pts[0]);
      const int ncoef = mono_count(2, k);
      std::vector<int> comps;
      if (variant == "div") comps = {-1};  // marker: scalar v.n
      else comps = {0, 1, 2};
      for (int comp : comps) {
        std::vector<std::vector<Rat>> block(ncoef, std::vector<Rat>(ncand, Rat(0)));
        for (std::size_t cidx = 0; cidx < ncand; ++cidx) {
          const BaryField& v = cands[cidx];
          BaryPoly p(dim, v.comp[0].degree);
          if (comp < 0) {
            p = v.comp[0] * n[0] + v.comp[1] * n[1] + v.comp[2] * n[2];
          } else {
            // (v x n)_comp = sum_j (-mskw(n))_{comp j} ... use mskw: v x n = -n x v.
            Mat3 mn = -mskw(n);
            p = v.comp[0] * mn(comp, 0) + v.comp[1] * mn(comp, 1) + v.comp[2] * mn(comp, 2);
          }
          BaryPoly rp = p.raised_to(k).restricted(fv);
          for (int c = 0; c < ncoef; ++c) block[c][cidx] = rp.c[c];
        }
        for (auto& row : block) rows.push_back(std::move(row));
      }
    }
    RatMatrix A(static_cast<int>(rows.size()), static_cast<int>(ncand));
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (std::size_t j = 0; j < ncand; ++j)
        A.at(static_cast<int>(i), static_cast<int>(j)) = rows[i][j];
    RatMatrix N = nullspace(A);
    for (int col = 0; col < N.cols; ++col) {
      BaryField acc = cands[0] * N.at(0, col);
      for (std::size_t i = 1; i < ncand; ++i)
        if (N.at(static_cast<int>(i), col) != 0)
          acc = acc + cands[i] * N.at(static_cast<int>(i), col);
      sb.basis.push_back(std::move(acc));
    }
    return sb;
  }

  if ((cls == TensorClass::S || cls == TensorClass::T) && variant == "div") {
    if (dim != 3) throw std::invalid_argument("bubble_space: tensor div bubble needs a tet host");
    SpaceBasis sb{host, k, cls, variant, {}, {}};
    // Block A: plain bubble at r_+ tensored with the class.
    SpaceBasis plainA = bubble_space(host, k, plus(r), cls, "plain");
    sb.basis = plainA.basis;
    std::size_t expected = plainA.basis.size();
    // Block B: edge bubbles (x) tangential edge plane when r_e = -1.
    if (r.r_e == -1) {
      for (const auto& ev : local_subsets(1)) {
        GeomPtr eg = std::make_shared<const SimplexGeometry>(host->sub(ev));
        SpaceBasis eb = bubble_space(eg, k, {r.r_v, -1, -1}, TensorClass::R, "plain");
        EdgeFrame fr = build_edge_frame(host->verts[ev[0]], host->verts[ev[1]]);
        TnBasis tb = tn_basis(cls, SubKind::edge, TnVariant::div, fr);
        for (const Mat3& E : tb.tangential_part)
          for (const BaryField& b : eb.basis) {
            BaryPoly ext = embed_poly(b.comp[0], ev, 3);
            BaryField f(cls, host, 0);
            for (int i = 0; i < 3; ++i)
              for (int j = 0; j < 3; ++j) f.at(i, j) = ext * E(i, j);
            sb.basis.push_back(std::move(f));
            ++expected;
          }
      }
    }
    // Block C: face bubbles at r_+ (x) tangential face plane when r_f = -1.
    if (r.r_f == -1) {
      SmoothnessVector rp = plus(r);
      for (const auto& fv : local_subsets(2)) {
        GeomPtr fg = std::make_shared<const SimplexGeometry>(host->sub(fv));
        SpaceBasis fb = bubble_space(fg, k, {rp.r_v, rp.r_e, -1}, TensorClass::R, "plain");
        FaceFrame fr =
            build_face_frame(host->verts[fv[0]], host->verts[fv[1]], host->verts[fv[2]]);
        TnBasis tb = tn_basis(cls, SubKind::face, TnVariant::div, fr);
        for (const Mat3& E : tb.tangential_part)
          for (const BaryField& b : fb.basis) {
            BaryPoly ext = embed_poly(b.comp[0], fv, 3);
            BaryField f(cls, host, 0);
            for (int i = 0; i < 3; ++i)
              for (int j = 0; j < 3; ++j) f.at(i, j) = ext * E(i, j);
            sb.basis.push_back(std::move(f));
            ++expected;
          }
      }
    }
    if (detail::stacked_rank(sb.basis, k) != static_cast<int>(expected))
      throw std::logic_error("bubble_space: tensor div blocks are not a direct sum");
    return sb;
  }

  if (cls == TensorClass::S && variant == "curl") {
    if (dim != 3) throw std::invalid_argument("bubble_space: tensor curl bubble needs a tet host");
    SpaceBasis sb{host, k, cls, variant, {}, {}};
    SpaceBasis plainA = bubble_space(host, k, plus(r), cls, "plain");
    sb.basis = plainA.basis;
    std::size_t expected = plainA.basis.size();
    if (r.r_f == -1) {
      for (const auto& fv : local_subsets(2)) {
        GeomPtr fg = std::make_shared<const SimplexGeometry>(host->sub(fv));
        SpaceBasis fb = bubble_space(fg, k, {r.r_v, r.r_e, -1}, TensorClass::R, "plain");
        FaceFrame fr =
            build_face_frame(host->verts[fv[0]], host->verts[fv[1]], host->verts[fv[2]]);
        Mat3 nn = outer(fr.n, fr.n);
        for (const BaryField& b : fb.basis) {
          BaryPoly ext = embed_poly(b.comp[0], fv, 3);
          BaryField f(cls, host, 0);
          for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) f.at(i, j) = ext * nn(i, j);
          sb.basis.push_back(std::move(f));
          ++expected;
        }
      }
    }
    if (detail::stacked_rank(sb.basis, k) != static_cast<int>(expected))
      throw std::logic_error("bubble_space: curl-S blocks are not a direct sum");
    return sb;
  }

  throw std::invalid_argument("bubble_space: unsupported class/variant (" + class_name(cls) +
                              ", " + variant + ")");
}

inline std::string geom_key(const GeomPtr& g) {
  std::ostringstream os;
  os << g->dim;
  for (const auto& v : g->verts)
    for (int i = 0; i < 3; ++i) os << "," << v[i];
  return os.str();
}

}  // namespace detail

/// Memoized front end; bubble spaces recur during element assembly.
inline SpaceBasis bubble_space(GeomPtr host, int k, SmoothnessVector r, TensorClass cls,
                               const std::string& variant) {
  static std::map<std::string, SpaceBasis> cache;
  static std::mutex mu;
  std::ostringstream key;
  key << detail::geom_key(host) << "|" << k << "|" << to_string(r) << "|" << class_name(cls)
      << "|" << variant;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key.str());
    if (it != cache.end()) return it->second;
  }
  SpaceBasis sb = detail::bubble_space_uncached(std::move(host), k, r, cls, variant);
  std::lock_guard<std::mutex> lock(mu);
  return cache.emplace(key.str(), std::move(sb)).first->second;
}

inline int bubble_dim(GeomPtr host, int k, SmoothnessVector r, TensorClass cls,
                      const std::string& variant) {
  if (k < 0) return 0;
  if (host->dim == 1 && variant == "plain" && cls == TensorClass::R)
    return std::max(0, k - 2 * r.r_v - 1);  // b_e^{r_v+1} P_{k-2(r_v+1)}(e)
  return bubble_space(std::move(host), k, r, cls, variant).dim();
}

}  // namespace tetfec

#endif
