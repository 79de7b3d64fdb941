#ifndef TETFEC_GEOMETRY_HPP
#define TETFEC_GEOMETRY_HPP

/// Rational simplex geometry embedded in 3-space: vertices, tangential
/// barycentric gradients, and exact measures for edges, triangles and
/// tetrahedra.

#include <memory>
#include <optional>
#include <stdexcept>
#include <vector>

#include "tetfec/linalg.hpp"
#include "tetfec/rat.hpp"

namespace tetfec {

/// A d-simplex (1 <= d <= 3) with rational vertices.  grad_lambda[i] is the
/// gradient of barycentric coordinate lambda_i tangential to the affine hull,
/// so directional derivatives along any vector v use the chain rule
/// d/dv = sum_i (v . grad_lambda[i]) d/d lambda_i, which for d < 3 kills the
/// normal part of v automatically.
struct SimplexGeometry {
  int dim = 0;
  std::vector<Vec3> verts;        // dim + 1 vertices
  std::vector<Vec3> grad_lambda;  // dim + 1 tangential gradients
  Rat measure2;                   // squared Euclidean d-measure

  explicit SimplexGeometry(std::vector<Vec3> vs) : verts(std::move(vs)) {
    if (verts.size() < 2 || verts.size() > 4)
      throw std::invalid_argument("SimplexGeometry: need 2..4 vertices");
    dim = static_cast<int>(verts.size()) - 1;

    // Edge matrix E (columns v_i - v_0) and Gram matrix G = E^T E.
    std::vector<Vec3> e(dim);
    for (int i = 0; i < dim; ++i) e[i] = verts[i + 1] - verts[0];
    RatMatrix g(dim, dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) g.at(i, j) = dot(e[i], e[j]);
    Rat dg = det(g);
    if (dg == 0) throw std::invalid_argument("SimplexGeometry: degenerate simplex");
    Int fact = 1;
    for (int i = 2; i <= dim; ++i) fact *= i;
    measure2 = dg / Rat(fact * fact);

    // grad lambda_i = E G^{-1} e_i for i >= 1 (lambda_i is the i-th affine
    // coordinate of the orthogonal projection onto the hull).
    auto gi = inverse(g);
    grad_lambda.assign(dim + 1, Vec3{Rat(0), Rat(0), Rat(0)});
    for (int i = 1; i <= dim; ++i) {
      Vec3 v{Rat(0), Rat(0), Rat(0)};
      for (int j = 0; j < dim; ++j) v = v + e[j] * gi->at(j, i - 1);
      grad_lambda[i] = v;
      grad_lambda[0] = grad_lambda[0] - v;
    }
  }

  /// Face normal (v1-v0) x (v2-v0); rational, not normalized.
  Vec3 normal() const {
    if (dim != 2) throw std::logic_error("normal: face geometry required");
    return cross(verts[1] - verts[0], verts[2] - verts[0]);
  }

  /// Edge direction v1 - v0; rational, not normalized.
  Vec3 tangent() const {
    if (dim != 1) throw std::logic_error("tangent: edge geometry required");
    return verts[1] - verts[0];
  }

  /// Exact Euclidean measure, if it is rational.
  std::optional<Rat> euclidean_measure() const { return exact_sqrt(measure2); }

  /// Geometry of the sub-simplex spanned by the given local vertex indices.
  SimplexGeometry sub(const std::vector<int>& idx) const {
    std::vector<Vec3> vs;
    for (int i : idx) vs.push_back(verts.at(static_cast<std::size_t>(i)));
    return SimplexGeometry(std::move(vs));
  }

  /// Barycentric coordinates of a point in the affine hull.
  std::vector<Rat> barycentric(const Vec3& x) const {
    std::vector<Rat> b(dim + 1, Rat(0));
    Rat s(0);
    for (int i = 1; i <= dim; ++i) {
      b[i] = dot(grad_lambda[i], x - verts[0]);
      s += b[i];
    }
    b[0] = Rat(1) - s;
    return b;
  }
};

using GeomPtr = std::shared_ptr<const SimplexGeometry>;

inline GeomPtr make_geom(std::vector<Vec3> vs) {
  return std::make_shared<const SimplexGeometry>(std::move(vs));
}

/// Reference tetrahedron (0,0,0), e1, e2, e3.
inline GeomPtr ref_tet_geometry() {
  Rat z(0), o(1);
  return make_geom({Vec3{z, z, z}, Vec3{o, z, z}, Vec3{z, o, z}, Vec3{z, z, o}});
}

/// Unit right triangle in the z = 0 plane; rational unit normal (0,0,1).
inline GeomPtr ref_tri_geometry() {
  Rat z(0), o(1);
  return make_geom({Vec3{z, z, z}, Vec3{o, z, z}, Vec3{z, o, z}});
}

/// Unit edge along the x axis.
inline GeomPtr unit_edge_geometry() {
  Rat z(0), o(1);
  return make_geom({Vec3{z, z, z}, Vec3{o, z, z}});
}

}  // namespace tetfec

#endif
