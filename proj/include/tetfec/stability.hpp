#ifndef TETFEC_STABILITY_HPP
#define TETFEC_STABILITY_HPP

/// Sufficient conditions under which div maps the vector- and tensor-valued
/// spaces onto their L^2 targets, and the combined hypothesis list for an
/// exact discrete de Rham sequence.  These predicates gate element and
/// complex constructions; actual surjectivity is verified separately by rank
/// computations, so a false predicate with a true rank check means "stable
/// beyond the sufficient conditions", not an inconsistency.

#include "tetfec/bubbles.hpp"
#include "tetfec/smoothness.hpp"

namespace tetfec {

/// div V^div_k(r2, r3) = V^{L2}_{k-1}(r3): case split on (r2^f, r2^e), the
/// compatibility r3 >= r2 (-) 1, the degree threshold, and two non-empty
/// bubble spaces (an interior volume bubble at degree k-1 and a face bubble
/// at degree k).
inline bool is_div_stable(const SmoothnessVector& r2, const SmoothnessVector& r3, int k) {
  if (!is_valid(r2) || !is_valid(r3)) return false;
  if (r2.r_f >= 0) {
    if (!(r2.r_e >= 2 * r2.r_f + 1 && r2.r_v >= 2 * r2.r_e)) return false;
  } else {
    if (r2.r_e >= 1) {
      if (!(r2.r_v >= 2 * r2.r_e)) return false;
    } else {
      if (!(r2.r_v >= 2 * r2.r_e + 1)) return false;
    }
  }
  if (!geq(r3, ominus(r2, 1))) return false;
  if (k < std::max({2 * r2.r_v + 1, 2 * r3.r_v + 2, 1})) return false;
  if (bubble_dim(ref_tet_geometry(), k - 1, r3, TensorClass::R, "plain") < 1) return false;
  if (bubble_dim(ref_tri_geometry(), k, r2, TensorClass::R, "plain") < 1) return false;
  return true;
}

/// div V^div_k(r; X) = V^{L2}_{k-1}(r (-) 1; R^3) for X symmetric (S) or
/// traceless (T): either the smooth case reduced to two scalar div
/// stabilities, or the discontinuous-trace case with explicit degree
/// thresholds.
inline bool is_divX_stable(const SmoothnessVector& r, int k, TensorClass X) {
  if (X != TensorClass::S && X != TensorClass::T)
    throw std::invalid_argument("is_divX_stable: class must be S or T");
  if (!is_valid(r)) return false;
  if (r.r_v >= 1 && r.r_e >= 0)
    return is_div_stable(r + 1, r, k + 1) && is_div_stable(r, ominus(r, 1), k);
  if (r.r_v >= 0 && r.r_e == -1 && r.r_f == -1) {
    if (X == TensorClass::S) return k >= std::max(2 * r.r_v + 1, 4);
    if (r.r_v >= 1) return k >= std::max(2 * r.r_v + 1, 4);
    return k >= 2;
  }
  return false;
}

/// Hypotheses for exactness of
///   R -> V^grad_{k+2}(r0) -> V^curl_{k+1}(r1,r2) -> V^div_k(r2,r3)
///     -> V^{L2}_{k-1}(r3) -> 0
/// and of the associated bubble complex: r0 >= 0 with r1 = r0 - 1 exactly,
/// the compatibility chain, div stability of the tail, and the degree
/// threshold over all four slots.
inline bool is_valid_derham_sequence(const SmoothnessVector& r0, const SmoothnessVector& r1,
                                     const SmoothnessVector& r2, const SmoothnessVector& r3,
                                     int k) {
  if (!is_valid(r0) || !is_valid(r1) || !is_valid(r2) || !is_valid(r3)) return false;
  if (!geq(r0, 0)) return false;
  if (!(r1 == r0 - 1)) return false;
  if (!geq(r2, ominus(r1, 1))) return false;
  if (!geq(r3, ominus(r2, 1))) return false;
  if (!is_div_stable(r2, r3, k)) return false;
  if (k < std::max({2 * r1.r_v + 1, 2 * r2.r_v + 1, 2 * r3.r_v + 2, 1})) return false;
  if (bubble_dim(ref_tet_geometry(), k - 1, r3, TensorClass::R, "plain") < 1) return false;
  if (bubble_dim(ref_tri_geometry(), k, r2, TensorClass::R, "plain") < 1) return false;
  return true;
}

}  // namespace tetfec

#endif
