#ifndef TETFEC_SMOOTHNESS_HPP
#define TETFEC_SMOOTHNESS_HPP

/// Smoothness vectors r = (r_v, r_e, r_f): the continuity orders requested at
/// vertices, edges and faces.  Entries live in {-1, 0, 1, ...}; -1 means no
/// continuity.  Validity demands each level be at least twice the next finer
/// one.  Plain +/- shift without clamping (intermediate vectors like r-2 are
/// formed before validation); ominus clamps at -1, plus at 0.

#include <algorithm>
#include <string>

namespace tetfec {

struct SmoothnessVector {
  int r_v = -1, r_e = -1, r_f = -1;

  friend bool operator==(const SmoothnessVector&, const SmoothnessVector&) = default;

  SmoothnessVector operator+(int m) const { return {r_v + m, r_e + m, r_f + m}; }
  SmoothnessVector operator-(int m) const { return {r_v - m, r_e - m, r_f - m}; }
};

/// Componentwise r >= s.
inline bool geq(const SmoothnessVector& r, const SmoothnessVector& s) {
  return r.r_v >= s.r_v && r.r_e >= s.r_e && r.r_f >= s.r_f;
}

inline bool geq(const SmoothnessVector& r, int c) { return geq(r, {c, c, c}); }

inline SmoothnessVector ominus(const SmoothnessVector& r, int m) {
  return {std::max(r.r_v - m, -1), std::max(r.r_e - m, -1), std::max(r.r_f - m, -1)};
}

inline SmoothnessVector plus(const SmoothnessVector& r) {
  return {std::max(r.r_v, 0), std::max(r.r_e, 0), std::max(r.r_f, 0)};
}

inline bool is_valid(const SmoothnessVector& r) {
  return r.r_f >= -1 && r.r_e >= std::max(2 * r.r_f, -1) && r.r_v >= std::max(2 * r.r_e, -1);
}

inline std::string to_string(const SmoothnessVector& r) {
  return "(" + std::to_string(r.r_v) + "," + std::to_string(r.r_e) + "," +
         std::to_string(r.r_f) + ")";
}

}  // namespace tetfec

#endif
