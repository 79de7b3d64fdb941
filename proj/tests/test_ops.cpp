#include <catch2/catch_amalgamated.hpp>

#include "tetfec/field.hpp"
#include "test_util.hpp"

using namespace tetfec;

namespace {

/// Skewed face with a non-unit rational normal, to exercise the explicit
/// |n| powers in the surface operators.
GeomPtr skew_face() {
  return make_geom({Vec3{Rat(0), Rat(0), Rat(0)}, Vec3{Rat(1), Rat(0), Rat(1)},
                    Vec3{Rat(0), Rat(2), Rat(1)}});
}

}  // namespace

TEST_CASE("grad of a barycentric coordinate is its constant gradient") {
  GeomPtr tet = ref_tet_geometry();
  BaryField f = scalar_field(tet, BaryPoly::lambda(3, 0));
  BaryField g = apply_diffop("grad", f);
  CHECK(g.equals(constant_vector_field(tet, tet->grad_lambda[0])));
}

TEST_CASE("mixed partials commute") {
  Rng rng(41);
  GeomPtr tet = ref_tet_geometry();
  BaryPoly p = random_poly(rng, 3, 4);
  CHECK(partial(partial(p, 0, *tet), 1, *tet).equals(partial(partial(p, 1, *tet), 0, *tet)));
}

TEST_CASE("curl grad and div curl vanish") {
  Rng rng(101);
  GeomPtr tet = ref_tet_geometry();
  for (int t = 0; t < 50; ++t) {
    int k = static_cast<int>(rng.uniform(1, 5));
    BaryField u = random_field(rng, TensorClass::R, tet, k);
    CHECK(apply_diffop("curl", apply_diffop("grad", u)).is_zero());
    BaryField v = random_field(rng, TensorClass::R3, tet, k);
    CHECK(apply_diffop("div", apply_diffop("curl", v)).is_zero());
  }
}

TEST_CASE("elasticity composites vanish: inc def and div inc") {
  Rng rng(55);
  GeomPtr tet = ref_tet_geometry();
  for (int t = 0; t < 50; ++t) {
    int k = static_cast<int>(rng.uniform(1, 4));
    BaryField v = random_field(rng, TensorClass::R3, tet, k + 2);
    CHECK(apply_diffop("inc", apply_diffop("def", v)).is_zero());
    BaryField s = random_field(rng, TensorClass::S, tet, k);
    CHECK(apply_diffop("div", apply_diffop("inc", s)).is_zero());
  }
}

TEST_CASE("divdiv composites vanish: symcurl devgrad and divdiv symcurl") {
  Rng rng(77);
  GeomPtr tet = ref_tet_geometry();
  for (int t = 0; t < 50; ++t) {
    int k = static_cast<int>(rng.uniform(1, 4));
    BaryField v = random_field(rng, TensorClass::R3, tet, k + 2);
    CHECK(apply_diffop("symcurl", apply_diffop("devgrad", v)).is_zero());
    BaryField tau = random_field(rng, TensorClass::T, tet, k);
    CHECK(apply_diffop("divdiv", apply_diffop("symcurl", tau)).is_zero());
  }
}

TEST_CASE("hessian composites vanish: curl hess, and curl of symmetric is traceless") {
  Rng rng(99);
  GeomPtr tet = ref_tet_geometry();
  for (int t = 0; t < 20; ++t) {
    BaryField u = random_field(rng, TensorClass::R, tet, 4);
    CHECK(apply_diffop("curl", apply_diffop("hess", u)).is_zero());
    BaryField s = random_field(rng, TensorClass::S, tet, 3);
    BaryField cs = apply_diffop("curl", s);
    CHECK(trace_field(cs).is_zero());
  }
}

TEST_CASE("operator output classes satisfy their constraints") {
  Rng rng(13);
  GeomPtr tet = ref_tet_geometry();
  BaryField v = random_field(rng, TensorClass::R3, tet, 3);
  CHECK(class_constraints_hold(apply_diffop("def", v)));
  CHECK(class_constraints_hold(apply_diffop("devgrad", v)));
  BaryField u = random_field(rng, TensorClass::R, tet, 4);
  CHECK(class_constraints_hold(apply_diffop("hess", u)));
  BaryField s = random_field(rng, TensorClass::S, tet, 4);
  CHECK_NOTHROW(apply_diffop("inc", s));  // as_class asserts symmetry internally
  BaryField tt = random_field(rng, TensorClass::T, tet, 4);
  CHECK(class_constraints_hold(apply_diffop("symcurl", tt)));
}

TEST_CASE("incompatible classes and wrong geometry are rejected") {
  Rng rng(2);
  GeomPtr tet = ref_tet_geometry();
  GeomPtr tri = ref_tri_geometry();
  BaryField m = random_field(rng, TensorClass::M, tet, 2);
  CHECK_THROWS(apply_diffop("inc", m));
  CHECK_THROWS(apply_diffop("grad", m));
  CHECK_THROWS(apply_diffop("grad_f", random_field(rng, TensorClass::R, tet, 2)));
  CHECK_THROWS(apply_diffop("curl", random_field(rng, TensorClass::R3, tri, 2)));
  CHECK_THROWS(apply_diffop("nonsense", random_field(rng, TensorClass::R, tet, 2)));
}

TEST_CASE("surface composites vanish on flat and skewed faces") {
  Rng rng(31);
  for (GeomPtr face : {ref_tri_geometry(), skew_face()}) {
    for (int t = 0; t < 20; ++t) {
      int k = static_cast<int>(rng.uniform(1, 5));
      BaryField u = random_field(rng, TensorClass::R, face, k);
      // rot_f grad_f = 0 and div_f curl_f = 0.
      CHECK(apply_diffop("rot_f", apply_diffop("grad_f", u)).is_zero());
      CHECK(apply_diffop("div_f", apply_diffop("curl_f", u)).is_zero());
      // rot_f hess_f = 0 row-wise.
      CHECK(apply_diffop("rot_f", apply_diffop("hess_f", u)).is_zero());
    }
  }
}

TEST_CASE("face divdiv composite vanishes for tangential inputs") {
  Rng rng(83);
  for (GeomPtr face : {ref_tri_geometry(), skew_face()}) {
    Vec3 t1 = face->verts[1] - face->verts[0];
    Vec3 t2 = face->verts[2] - face->verts[0];
    for (int t = 0; t < 20; ++t) {
      int k = static_cast<int>(rng.uniform(1, 4));
      BaryPoly a = random_poly(rng, 2, k), b = random_poly(rng, 2, k);
      BaryField u = mul(a, constant_vector_field(face, t1)) +
                    mul(b, constant_vector_field(face, t2));
      CHECK(apply_diffop("div_f_div_f", apply_diffop("symcurl_f", u)).is_zero());
    }
  }
}

TEST_CASE("surface outputs are tangential") {
  Rng rng(19);
  GeomPtr face = skew_face();
  Vec3 n = face->normal();
  BaryField u = random_field(rng, TensorClass::R, face, 3);
  CHECK(dot_const(apply_diffop("grad_f", u), n).is_zero());
  CHECK(dot_const(apply_diffop("curl_f", u), n).is_zero());
  // hess_f is symmetric with n in both kernels.
  BaryField h = apply_diffop("hess_f", u);
  CHECK(class_constraints_hold(h));
  CHECK(matvec(h, n).is_zero());
  CHECK(vecmat(n, h).is_zero());
}

TEST_CASE("rot_f curl_f equals |n|^2 times the surface laplacian") {
  Rng rng(47);
  GeomPtr face = skew_face();
  Vec3 n = face->normal();
  Rat n2 = dot(n, n);
  BaryField u = random_field(rng, TensorClass::R, face, 4);
  BaryField lhs = apply_diffop("rot_f", apply_diffop("curl_f", u));
  BaryField gf = apply_diffop("grad_f", u);
  BaryField lap = apply_diffop("div_f", gf);
  CHECK(lhs.equals(lap * n2));
}

TEST_CASE("exact integration matches a floating-point quadrature oracle") {
  // Gauss-Legendre nodes on [0,1] (8 points, exact for degree <= 15),
  // tensorized through the Duffy map onto the reference tetrahedron.
  static const double gx[8] = {0.01985507175123188, 0.10166676129318664, 0.2372337950418355,
                               0.40828267875217511, 0.59171732124782489, 0.7627662049581645,
                               0.89833323870681336, 0.98014492824876812};
  static const double gw[8] = {0.05061426814518813, 0.11119051722668724, 0.15685332293894364,
                               0.18134189168918099, 0.18134189168918099, 0.15685332293894364,
                               0.11119051722668724, 0.05061426814518813};
  Rng rng(91);
  GeomPtr tet = ref_tet_geometry();
  for (int t = 0; t < 20; ++t) {
    BaryPoly p = random_poly(rng, 3, static_cast<int>(rng.uniform(0, 4)));
    double quad = 0.0;
    for (int i = 0; i < 8; ++i)
      for (int j = 0; j < 8; ++j)
        for (int k = 0; k < 8; ++k) {
          double u1 = gx[i], u2 = gx[j], u3 = gx[k];
          double x = u1, y = u2 * (1 - u1), z = u3 * (1 - u1) * (1 - u2);
          double jac = (1 - u1) * (1 - u1) * (1 - u2);
          // Evaluate the homogeneous form at double-precision barycentrics.
          const MonoTable& mt = mono_table(3, p.degree);
          double val = 0.0;
          double lam[4] = {1 - x - y - z, x, y, z};
          for (std::size_t m = 0; m < mt.list.size(); ++m) {
            if (p.c[m] == 0) continue;
            double term = to_double(p.c[m]);
            for (int a = 0; a < 4; ++a)
              for (int e = 0; e < mt.list[m][a]; ++e) term *= lam[a];
            val += term;
          }
          quad += gw[i] * gw[j] * gw[k] * val * jac;
        }
    double exact = to_double(integrate_subsimplex(scalar_field(tet, p), {0, 1, 2, 3}));
    double scale = std::max({1.0, std::fabs(exact), std::fabs(quad)});
    CHECK(std::fabs(exact - quad) <= 1e-10 * scale);
  }
}
