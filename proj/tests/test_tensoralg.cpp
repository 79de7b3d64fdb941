// Tangential/normal decompositions, pointwise tensor operators, kernel
// spaces, and the randomized algebraic identity checks.

#include <catch2/catch_amalgamated.hpp>

#include "tetfec/tensoralg.hpp"
#include "test_util.hpp"

using namespace tetfec;

namespace {

EdgeFrame orthogonal_edge_frame() {
  // t = (1,1,0); n1, n2 orthogonal to t and to each other, non-unit.
  return EdgeFrame{Vec3{1, 1, 0}, Vec3{1, -1, 0}, Vec3{0, 0, 2}};
}

EdgeFrame face_normal_edge_frame() {
  // n1, n2 orthogonal to t but NOT to each other (incident-face normals).
  return EdgeFrame{Vec3{0, 0, 3}, Vec3{1, 0, 0}, Vec3{1, 1, 0}};
}

FaceFrame skewed_face_frame() {
  // Orthogonal triple with three different (irrational) lengths.
  Vec3 t1{1, 2, 2}, t2{2, 1, -2};
  return FaceFrame{t1, t2, cross(t1, t2)};
}

}  // namespace

TEST_CASE("pointwise operators match their definitions") {
  Mat3 m = mskw(Vec3{1, 0, 0});
  Mat3 expect;
  expect(1, 2) = -1;
  expect(2, 1) = 1;
  CHECK(m == expect);

  Mat3 I = Mat3::identity();
  CHECK(S_op(I) == I * Rat(-2));

  Rng rng(11);
  for (int i = 0; i < 20; ++i) {
    Vec3 w = rng.vec3();
    CHECK((vskw(mskw(w)) - w).is_zero());
  }
}

TEST_CASE("sym + skw reconstructs and dev is traceless") {
  Rng rng(12);
  for (int i = 0; i < 20; ++i) {
    Mat3 m = rng.mat3();
    CHECK(sym(m) + skw(m) == m);
    CHECK(trace(dev(m)) == 0);
    CHECK(trace(S_op(m)) == -2 * trace(m));
  }
}

TEST_CASE("tensor_op dispatch and errors") {
  Mat3 m;
  m(0, 1) = 5;
  CHECK(std::get<Mat3>(tensor_op("sym", TensorValue{m})) == sym(m));
  CHECK(std::get<Rat>(tensor_op("tr", TensorValue{m})) == 0);
  CHECK(std::get<Mat3>(tensor_op("iota", TensorValue{Rat(3)})) == Mat3::identity() * Rat(3));
  CHECK(std::get<Mat3>(tensor_op("mskw", TensorValue{Vec3{0, 0, 1}})) == mskw(Vec3{0, 0, 1}));
  CHECK_THROWS_AS(tensor_op("mskw", TensorValue{m}), std::invalid_argument);
  CHECK_THROWS_AS(tensor_op("nosuch", TensorValue{m}), std::invalid_argument);

  // Projectors: Pi_F annihilates n, fixes tangents; Pi_F^perp rotates
  // tangents within the plane and annihilates n.
  Vec3 n{1, 2, -2};
  Mat3 P = tensor_op_proj("proj_PiF", n);
  Mat3 Pp = tensor_op_proj("proj_PiF_perp", n);
  CHECK((P * n).is_zero());
  CHECK((Pp * n).is_zero());
  Vec3 t{2, -1, 0};  // t . n = 0
  CHECK((P * t - t).is_zero());
  CHECK(dot(Pp * t, n) == 0);
  CHECK(!(Pp * t).is_zero());
}

TEST_CASE("edge decompositions have the listed sizes and span the class") {
  for (const EdgeFrame& fr : {orthogonal_edge_frame(), face_normal_edge_frame()}) {
    TnBasis bT = tn_basis(TensorClass::T, SubKind::edge, TnVariant::div, fr);
    CHECK(bT.tangential_part.size() == 2);
    CHECK(bT.normal_part.size() == 6);
    CHECK(tn_total_rank(bT) == class_dim(TensorClass::T));

    TnBasis bS = tn_basis(TensorClass::S, SubKind::edge, TnVariant::div, fr);
    CHECK(bS.tangential_part.size() == 1);
    CHECK(bS.normal_part.size() == 5);
    CHECK(tn_total_rank(bS) == class_dim(TensorClass::S));
  }
}

TEST_CASE("face decompositions have the listed sizes and span the class") {
  FaceFrame easy{Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{0, 0, 1}};
  for (const FaceFrame& fr : {easy, skewed_face_frame()}) {
    TnBasis bS = tn_basis(TensorClass::S, SubKind::face, TnVariant::div, fr);
    CHECK(bS.tangential_part.size() == 3);
    CHECK(bS.normal_part.size() == 3);
    CHECK(tn_total_rank(bS) == class_dim(TensorClass::S));

    TnBasis bT = tn_basis(TensorClass::T, SubKind::face, TnVariant::div, fr);
    CHECK(bT.tangential_part.size() == 5);
    CHECK(bT.normal_part.size() == 3);
    CHECK(tn_total_rank(bT) == class_dim(TensorClass::T));

    TnBasis bC = tn_basis(TensorClass::S, SubKind::face, TnVariant::curl, fr);
    CHECK(bC.tangential_part.size() == 5);
    CHECK(bC.normal_part.size() == 1);
    CHECK(tn_total_rank(bC) == class_dim(TensorClass::S));

    CHECK(s_face_plane(fr).size() == 3);
  }
}

TEST_CASE("tn_basis rejects unsupported combinations and bad frames") {
  EdgeFrame e = orthogonal_edge_frame();
  FaceFrame f = skewed_face_frame();
  CHECK_THROWS_AS(tn_basis(TensorClass::S, SubKind::edge, TnVariant::curl, e),
                  std::invalid_argument);
  CHECK_THROWS_AS(tn_basis(TensorClass::T, SubKind::face, TnVariant::curl, f),
                  std::invalid_argument);
  CHECK_THROWS_AS(tn_basis(TensorClass::M, SubKind::edge, TnVariant::div, e),
                  std::invalid_argument);
  CHECK_THROWS_AS(tn_basis(TensorClass::S, SubKind::face, TnVariant::div, e),
                  std::invalid_argument);
  EdgeFrame bad{Vec3{1, 0, 0}, Vec3{1, 1, 0}, Vec3{0, 1, 0}};  // n1 not orthogonal to t
  CHECK_THROWS_AS(tn_basis(TensorClass::S, SubKind::edge, TnVariant::div, bad),
                  std::invalid_argument);
}

TEST_CASE("kernel spaces have the expected dimensions and membership") {
  GeomPtr tet = ref_tet_geometry();
  GeomPtr tri = ref_tri_geometry();

  CHECK(kernel_space("R", tet).basis.size() == 1);
  CHECK(kernel_space("P1", tet).basis.size() == 4);
  CHECK(kernel_space("RM", tet).basis.size() == 6);
  CHECK(kernel_space("RT", tet).basis.size() == 4);
  CHECK(kernel_space("RT_f", tri).basis.size() == 3);
  CHECK(kernel_space("RM_f", tri).basis.size() == 3);
  CHECK_THROWS_AS(kernel_space("RM", tri), std::invalid_argument);
  CHECK_THROWS_AS(kernel_space("RT_f", tet), std::invalid_argument);
  CHECK_THROWS_AS(kernel_space("nosuch", tet), std::invalid_argument);

  // Rigid motions are exactly killed by the symmetric gradient.
  for (const BaryField& v : kernel_space("RM", tet).basis)
    CHECK(apply_diffop("def", v).is_zero());
  // Raviart-Thomas fields have constant divergence; the position part has 3.
  CHECK(apply_diffop("div", kernel_space("RT", tet).basis[3]).comp[0].equals(
      BaryPoly::constant(3, 3)));

  // Face variants are tangential, and face rigid motions kill the
  // tangential symmetric gradient.
  Vec3 n = tri->normal();
  for (const std::string& id : {std::string("RT_f"), std::string("RM_f")})
    for (const BaryField& v : kernel_space(id, tri).basis) {
      BaryPoly ndot = v.comp[0] * n[0] + v.comp[1] * n[1] + v.comp[2] * n[2];
      CHECK(ndot.is_zero());
    }
  for (const BaryField& v : kernel_space("RM_f", tri).basis)
    CHECK(sym_field(apply_diffop("grad_f", v)).is_zero());
}

TEST_CASE("algebraic identities hold on random fields") {
  for (const std::string& id : algebraic_identity_names()) {
    IdentityReport rep = verify_algebraic_identity(id);
    INFO(rep.identity << ": " << rep.witness);
    CHECK(rep.pass);
    CHECK(rep.trials == 20);
  }
  CHECK_THROWS_AS(verify_algebraic_identity("nosuch"), std::invalid_argument);
}

TEST_CASE("a perturbed identity fails with a witness") {
  // Guard against vacuously-passing checks: the trace identity with the
  // wrong cross-product association must be detected.  We emulate it by
  // checking tr(tau * mskw(n)) (rows tau_i x n) against 2 (vskw tau) . n.
  Rng rng(5);
  bool found_counterexample = false;
  for (int i = 0; i < 20 && !found_counterexample; ++i) {
    Mat3 tau = rng.mat3();
    Vec3 n = rng.nonzero_vec3();
    if (dot(vskw(tau), n) * 2 != trace(tau * mskw(n))) found_counterexample = true;
  }
  CHECK(found_counterexample);
}

TEST_CASE("traceless fields have dependent face-normal traces at vertices") {
  Rng rng(77);
  int done = 0;
  while (done < 10) {
    Vec3 v0 = rng.vec3(), v1 = rng.vec3(), v2 = rng.vec3(), v3 = rng.vec3();
    GeomPtr g;
    try {
      g = make_geom({v0, v1, v2, v3});
    } catch (const std::invalid_argument&) {
      continue;  // degenerate sample
    }
    BaryField tau = random_class_field(rng, TensorClass::T, g, 3);
    // Evaluate tau at vertex v0 and contract with the dual bases
    // t_{0i} = v_i - v_0 and grad lambda_i.
    Vec3 bary0{};  // barycentric coordinates of v0 as eval point
    std::vector<Rat> pt = {1, 0, 0, 0};
    Mat3 tau_at;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) tau_at(i, j) = tau.at(i, j).eval(pt);
    Rat total = 0;
    for (int i = 1; i <= 3; ++i) {
      Vec3 t0i = g->verts[i] - g->verts[0];
      total += dot(t0i, tau_at * g->grad_lambda[i]);
    }
    CHECK(total == 0);
    // Sanity: the same contraction reconstructs the trace for general
    // matrices, so it is nonzero for a generic non-traceless field.
    Mat3 generic = rng.mat3();
    Rat generic_total = 0;
    for (int i = 1; i <= 3; ++i) {
      Vec3 t0i = g->verts[i] - g->verts[0];
      generic_total += dot(t0i, generic * g->grad_lambda[i]);
    }
    CHECK(generic_total == trace(generic));
    ++done;
  }
}
