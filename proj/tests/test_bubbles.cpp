// Bubble polynomial spaces: jet-vanishing kernels on edges, triangles and
// tetrahedra, vector bubbles with vanishing normal/tangential boundary
// traces, and the tensor-valued direct-sum constructions.
//
// Dimension expectations come from two independent routes: the closed forms
// (an edge bubble of vertex order r is b_e^{r+1} P_{k-2(r+1)}) and explicit
// constraint-rank computations done with an exact computer-algebra oracle.

#include <catch2/catch_amalgamated.hpp>

#include "tetfec/bubbles.hpp"
#include "tetfec/random.hpp"

using namespace tetfec;

namespace {

GeomPtr tet() { return ref_tet_geometry(); }
GeomPtr tri() { return ref_tri_geometry(); }
GeomPtr edge() { return unit_edge_geometry(); }

// Rank of the union of two bases; equals dim(span A + span B).
int union_rank(const std::vector<BaryField>& a, const std::vector<BaryField>& b, int k) {
  std::vector<BaryField> all = a;
  all.insert(all.end(), b.begin(), b.end());
  return detail::stacked_rank(all, k);
}

// Restriction of the matrix-vector product (tau . w) to a face, as three
// scalar polynomials on the face.
std::vector<BaryPoly> face_restr_matvec(const BaryField& f, const Vec3& w,
                                        const std::vector<int>& fv) {
  std::vector<BaryPoly> out;
  for (int i = 0; i < 3; ++i) {
    BaryPoly p = f.at(i, 0) * w[0] + f.at(i, 1) * w[1] + f.at(i, 2) * w[2];
    out.push_back(p.restricted(fv));
  }
  return out;
}

}  // namespace

TEST_CASE("edge bubbles match the closed form", "[bubbles]") {
  // dim B_k(e; r_v) = max(0, k - 2 r_v - 1): the bubble is b_e^{r_v+1} times a
  // polynomial of degree k - 2(r_v + 1).
  for (int k = 0; k <= 6; ++k)
    for (int rv = -1; rv <= 2; ++rv) {
      const int expect = (rv == -1) ? k + 1 : std::max(0, k - 2 * rv - 1);
      CHECK(bubble_dim(edge(), k, {rv, -1, -1}, TensorClass::R, "plain") == expect);
      // The closed form must agree with the materialized kernel.
      CHECK(scalar_bubble_space(edge(), k, {rv, -1, -1}).dim() == expect);
    }

  SECTION("k=3, order-0 vertices: dimension 2 and endpoint vanishing") {
    SpaceBasis sb = scalar_bubble_space(edge(), 3, {0, -1, -1});
    REQUIRE(sb.dim() == 2);
    for (const BaryField& b : sb.basis) {
      CHECK(b.comp[0].eval({Rat(1), Rat(0)}) == 0);
      CHECK(b.comp[0].eval({Rat(0), Rat(1)}) == 0);
      CHECK(b.comp[0].eval({Rat(1, 3), Rat(2, 3)}) != 0);  // not the zero field
    }
  }
}

TEST_CASE("triangle bubble dimensions (frozen oracle values)", "[bubbles]") {
  CHECK(bubble_dim(tri(), 2, {0, -1, -1}, TensorClass::R, "plain") == 3);
  CHECK(bubble_dim(tri(), 3, {0, -1, -1}, TensorClass::R, "plain") == 7);
  CHECK(bubble_dim(tri(), 4, {1, 0, -1}, TensorClass::R, "plain") == 3);
  CHECK(bubble_dim(tri(), 6, {1, 0, -1}, TensorClass::R, "plain") == 10);

  SECTION("edge-order-0 triangle bubbles reduce to lambda0 lambda1 lambda2 P_{k-3}") {
    // Vertex constraints of order <= 1 are implied by the edge factorization,
    // so the dimension is that of P_{k-3} on the triangle.
    for (int k = 3; k <= 6; ++k)
      CHECK(bubble_dim(tri(), k, {1, 0, -1}, TensorClass::R, "plain") ==
            (k - 2) * (k - 1) / 2);
  }

  SECTION("basis members vanish on the constrained strata") {
    SpaceBasis sb = scalar_bubble_space(tri(), 6, {1, 0, -1});
    REQUIRE(sb.dim() == 10);
    for (const BaryField& b : sb.basis) {
      // On each edge the restriction is identically zero.
      CHECK(b.comp[0].restricted({0, 1}).is_zero());
      CHECK(b.comp[0].restricted({0, 2}).is_zero());
      CHECK(b.comp[0].restricted({1, 2}).is_zero());
      // First derivatives vanish at the vertices.
      for (int c = 0; c < 2; ++c) {
        Vec3 dir = tri()->verts[c + 1] - tri()->verts[0];
        BaryPoly d = dir_deriv(b.comp[0], dir, *tri());
        for (int v = 0; v < 3; ++v) {
          std::vector<Rat> pt(3, Rat(0));
          pt[v] = 1;
          CHECK(d.eval(pt) == 0);
        }
      }
    }
  }
}

TEST_CASE("tetrahedron scalar bubble dimensions (frozen oracle values)", "[bubbles]") {
  CHECK(bubble_dim(tet(), 3, {0, -1, -1}, TensorClass::R, "plain") == 16);
  CHECK(bubble_dim(tet(), 5, {1, 0, -1}, TensorClass::R, "plain") == 28);
  CHECK(bubble_dim(tet(), 4, {0, 0, 0}, TensorClass::R, "plain") == 1);
  CHECK(bubble_dim(tet(), 5, {1, 0, 0}, TensorClass::R, "plain") == 4);
  CHECK(bubble_dim(tet(), 6, {2, 1, 0}, TensorClass::R, "plain") == 10);
  // With vanishing faces the bubble is lambda0..lambda3 P_{k-4}; the extra
  // vertex/edge orders in (2,1,0) are implied by the face factorization.
  CHECK(bubble_dim(tet(), 6, {2, 1, 0}, TensorClass::R, "plain") == mono_count(3, 2));

  SECTION("no constraints reproduces the full polynomial space") {
    for (int k = 0; k <= 4; ++k)
      CHECK(bubble_dim(tet(), k, {-1, -1, -1}, TensorClass::R, "plain") == mono_count(3, k));
  }

  SECTION("nesting: higher smoothness gives a subspace") {
    const int k = 5;
    SpaceBasis big = scalar_bubble_space(tet(), k, {0, -1, -1});
    SpaceBasis mid = scalar_bubble_space(tet(), k, {1, 0, -1});
    SpaceBasis small = scalar_bubble_space(tet(), k, {1, 0, 0});
    CHECK(big.dim() > mid.dim());
    CHECK(mid.dim() > small.dim());
    // span(small) subset span(mid) subset span(big): adding the smaller basis
    // to the larger one does not increase the rank.
    CHECK(union_rank(big.basis, mid.basis, k) == big.dim());
    CHECK(union_rank(mid.basis, small.basis, k) == mid.dim());
  }
}

TEST_CASE("zero-mean bubbles", "[bubbles]") {
  SpaceBasis all = scalar_bubble_space(tet(), 5, {1, 0, -1});
  SpaceBasis l2 = bubble_space(tet(), 5, {1, 0, -1}, TensorClass::R, "L2");
  REQUIRE(all.dim() == 28);
  CHECK(l2.dim() == 27);  // some bubble has nonzero mean, so codimension 1
  for (const BaryField& b : l2.basis) CHECK(b.comp[0].integral_normalized() == 0);
  CHECK(union_rank(all.basis, l2.basis, 5) == all.dim());
}

TEST_CASE("vector bubbles with vanishing normal or tangential traces", "[bubbles]") {
  const SmoothnessVector r{0, -1, -1};
  const int k = 4;
  SpaceBasis bdiv = bubble_space(tet(), k, r, TensorClass::R3, "div");
  SpaceBasis bcurl = bubble_space(tet(), k, r, TensorClass::R3, "curl");
  SpaceBasis ball = bubble_space(tet(), k, r, TensorClass::R3, "plain");
  SpaceBasis bplus = bubble_space(tet(), k, plus(r), TensorClass::R3, "plain");

  // Direct-sum counts: vertex-order-0 bubbles on every stratum.
  // div: 3 interior + 6 edges x dim B_4(e;0) x 1 tangent + 4 faces x
  //      dim B_4(f;(0,0)) x 2 tangents = 3 + 18 + 24.
  CHECK(bdiv.dim() == 45);
  // curl: 3 interior + 4 faces x dim B_4(f;(0,0)) x 1 normal = 3 + 12.
  CHECK(bcurl.dim() == 15);
  CHECK(bdiv.dim() == 3 * bubble_dim(tet(), k, plus(r), TensorClass::R, "plain") +
                          6 * bubble_dim(edge(), k, {0, -1, -1}, TensorClass::R, "plain") +
                          4 * 2 * bubble_dim(tri(), k, {0, 0, -1}, TensorClass::R, "plain"));

  SECTION("trace vanishing on every face") {
    for (const auto& fv : detail::local_subsets(2)) {
      std::vector<Vec3> pts;
      for (int i : fv) pts.push_back(tet()->verts[i]);
      Vec3 n = cross(pts[1] - pts[0], pts[2] - pts[0]);
      for (const BaryField& v : bdiv.basis) {
        BaryPoly vn = v.comp[0] * n[0] + v.comp[1] * n[1] + v.comp[2] * n[2];
        CHECK(vn.restricted(fv).is_zero());
      }
      Mat3 mn = -mskw(n);  // v x n = -n x v
      for (const BaryField& v : bcurl.basis)
        for (int c = 0; c < 3; ++c) {
          BaryPoly p =
              v.comp[0] * mn(c, 0) + v.comp[1] * mn(c, 1) + v.comp[2] * mn(c, 2);
          CHECK(p.restricted(fv).is_zero());
        }
    }
  }

  SECTION("chain: B^3(r_+) inside the trace bubbles inside B^3(r)") {
    CHECK(union_rank(bdiv.basis, bplus.basis, k) == bdiv.dim());
    CHECK(union_rank(bcurl.basis, bplus.basis, k) == bcurl.dim());
    CHECK(union_rank(ball.basis, bdiv.basis, k) == ball.dim());
    CHECK(union_rank(ball.basis, bcurl.basis, k) == ball.dim());
  }

  SECTION("face-order smoothness makes the trace conditions automatic") {
    const SmoothnessVector rf0{0, 0, 0};
    const int d = bubble_dim(tet(), k, rf0, TensorClass::R, "plain");
    CHECK(bubble_dim(tet(), k, rf0, TensorClass::R3, "plain") == 3 * d);
    CHECK(bubble_dim(tet(), k, rf0, TensorClass::R3, "div") == 3 * d);
    CHECK(bubble_dim(tet(), k, rf0, TensorClass::R3, "curl") == 3 * d);
  }
}

TEST_CASE("tensor-valued normal-trace bubbles", "[bubbles]") {
  const SmoothnessVector r{0, -1, -1};
  const int k = 4;
  SpaceBasis sdiv = bubble_space(tet(), k, r, TensorClass::S, "div");
  SpaceBasis tdiv = bubble_space(tet(), k, r, TensorClass::T, "div");

  // Direct sums: interior block (x) class, edge blocks (x) tangential edge
  // matrices, face blocks (x) tangential face matrices.
  CHECK(sdiv.dim() == 60);   // 6*1 + 6*3*1 + 4*3*3
  CHECK(tdiv.dim() == 104);  // 8*1 + 6*3*2 + 4*3*5

  SECTION("normal traces tau . n vanish on every face") {
    for (const auto& fv : detail::local_subsets(2)) {
      std::vector<Vec3> pts;
      for (int i : fv) pts.push_back(tet()->verts[i]);
      Vec3 n = cross(pts[1] - pts[0], pts[2] - pts[0]);
      for (const BaryField& f : sdiv.basis)
        for (const BaryPoly& p : face_restr_matvec(f, n, fv)) CHECK(p.is_zero());
      for (const BaryField& f : tdiv.basis)
        for (const BaryPoly& p : face_restr_matvec(f, n, fv)) CHECK(p.is_zero());
    }
  }

  SECTION("class membership pointwise") {
    std::vector<Rat> pt = {Rat(1, 7), Rat(2, 7), Rat(3, 7), Rat(1, 7)};
    auto at_pt = [&](const BaryField& f) {
      Mat3 m;
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m(i, j) = f.at(i, j).eval(pt);
      return m;
    };
    for (const BaryField& f : sdiv.basis) CHECK(matrix_in_class(TensorClass::S, at_pt(f)));
    for (const BaryField& f : tdiv.basis) CHECK(matrix_in_class(TensorClass::T, at_pt(f)));
  }

  SECTION("smooth case has no extra blocks") {
    // r = (2,1,0) satisfies r_e, r_f >= 0, so the div bubble is just the plain
    // bubble tensored with the class.
    CHECK(bubble_dim(tet(), 6, {2, 1, 0}, TensorClass::S, "div") == 10 * 6);
  }
}

TEST_CASE("symmetric-matrix tangential-trace bubbles", "[bubbles]") {
  // The tangential trace of a symmetric matrix field on a face consists of
  // n x tau x n and n^T tau Pi_f; only the n (x) n component is invisible.
  const int k = 4;
  SpaceBasis sc = bubble_space(tet(), k, {0, 0, -1}, TensorClass::S, "curl");
  CHECK(sc.dim() == 18);  // 6 interior + 4 faces x dim B_4(f;(0,0)) x {n (x) n}
  CHECK(bubble_space(tet(), 5, {1, 0, -1}, TensorClass::S, "curl").dim() == 48);

  for (const auto& fv : detail::local_subsets(2)) {
    std::vector<Vec3> pts;
    for (int i : fv) pts.push_back(tet()->verts[i]);
    Vec3 n = cross(pts[1] - pts[0], pts[2] - pts[0]);
    Mat3 mn = mskw(n);
    for (const BaryField& f : sc.basis) {
      // n x tau x n = mskw(n) tau mskw(n)^T entrywise; restriction must vanish.
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
          BaryPoly acc(3, 0);
          for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) acc = acc + f.at(a, b) * (mn(i, a) * mn(j, b));
          CHECK(acc.restricted(fv).is_zero());
        }
      // n^T tau Pi_f with Pi_f = (n.n) I - n n^T (scaled projector stays exact).
      Mat3 proj = Mat3::identity() * dot(n, n) - outer(n, n);
      for (int j = 0; j < 3; ++j) {
        BaryPoly acc(3, 0);
        for (int a = 0; a < 3; ++a)
          for (int b = 0; b < 3; ++b) acc = acc + f.at(a, b) * (n[a] * proj(b, j));
        CHECK(acc.restricted(fv).is_zero());
      }
    }
  }
}

TEST_CASE("bubble space errors and caching", "[bubbles]") {
  CHECK_THROWS_AS(bubble_space(tet(), 3, {0, -1, -1}, TensorClass::R, "div"),
                  std::invalid_argument);
  CHECK_THROWS_AS(bubble_space(tri(), 3, {0, -1, -1}, TensorClass::R3, "div"),
                  std::invalid_argument);
  CHECK_THROWS_AS(bubble_space(tet(), 3, {0, -1, -1}, TensorClass::R3, "L2"),
                  std::invalid_argument);
  CHECK_THROWS_AS(bubble_space(tet(), 3, {0, -1, -1}, TensorClass::T, "curl"),
                  std::invalid_argument);

  // Memoized calls return identical bases.
  SpaceBasis a = bubble_space(tet(), 3, {0, -1, -1}, TensorClass::R, "plain");
  SpaceBasis b = bubble_space(tet(), 3, {0, -1, -1}, TensorClass::R, "plain");
  REQUIRE(a.dim() == b.dim());
  for (int i = 0; i < a.dim(); ++i) CHECK(a.basis[i].equals(b.basis[i]));
  // Negative degree yields the empty space.
  CHECK(bubble_dim(tet(), -1, {0, -1, -1}, TensorClass::R, "plain") == 0);
}
