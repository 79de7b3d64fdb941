// Mesh incidence, conformity checks, frames, built-ins, and the text parser.

#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "tetfec/mesh.hpp"
#include "test_util.hpp"

using namespace tetfec;

TEST_CASE("built-in meshes have the expected sub-simplex counts") {
  Mesh rt = build_mesh("ref_tet");
  CHECK(rt.count(0) == 4);
  CHECK(rt.count(1) == 6);
  CHECK(rt.count(2) == 4);
  CHECK(rt.count(3) == 1);
  CHECK(euler_characteristic(rt) == 1);

  Mesh tt = build_mesh("two_tets");
  CHECK(tt.count(0) == 5);
  CHECK(tt.count(1) == 9);
  CHECK(tt.count(2) == 7);
  CHECK(tt.count(3) == 2);
  CHECK(euler_characteristic(tt) == 1);

  Mesh c6 = build_mesh("cube6");
  CHECK(c6.count(0) == 8);
  CHECK(c6.count(1) == 19);
  CHECK(c6.count(2) == 18);
  CHECK(c6.count(3) == 6);
  CHECK(euler_characteristic(c6) == 1);

  int boundary = 0;
  for (int f = 0; f < c6.count(2); ++f) boundary += c6.is_boundary_face(f) ? 1 : 0;
  CHECK(boundary == 12);

  CHECK_THROWS_AS(build_mesh("nosuch"), std::invalid_argument);
}

TEST_CASE("incidence tables are consistent") {
  Mesh m = build_mesh("cube6");
  // Every tet has 4 vertices, 6 edges, 4 faces in local lexicographic order.
  for (int t = 0; t < m.count(3); ++t) {
    CHECK(m.sub_of_tet[0][t].size() == 4);
    CHECK(m.sub_of_tet[1][t].size() == 6);
    CHECK(m.sub_of_tet[2][t].size() == 4);
    for (int j = 0; j < 4; ++j) {
      int f = m.sub_of_tet[2][t][j];
      CHECK(m.local_index(2, f, t) == j);
      // The face's vertices are a subset of the tet's.
      auto slots = m.local_vertex_slots(2, f, t);
      CHECK(slots.size() == 3);
      CHECK(std::is_sorted(slots.begin(), slots.end()));
    }
  }
  // Interior faces touch exactly two tets; every face one or two.
  for (int f = 0; f < m.count(2); ++f) {
    auto n = m.tets_of[2][f].size();
    CHECK(n >= 1);
    CHECK(n <= 2);
  }
  // The shared face of two_tets.
  Mesh tt = build_mesh("two_tets");
  int shared = 0;
  for (int f = 0; f < tt.count(2); ++f)
    if (tt.tets_of[2][f].size() == 2) ++shared;
  CHECK(shared == 1);
}

TEST_CASE("deterministic rebuild yields identical tables and frames") {
  Mesh a = build_mesh("cube6");
  Mesh b = build_mesh("cube6");
  for (int d = 0; d < 4; ++d) CHECK(a.simplices[d] == b.simplices[d]);
  for (int e = 0; e < a.count(1); ++e) {
    CHECK((a.edge_frames[e].t - b.edge_frames[e].t).is_zero());
    CHECK((a.edge_frames[e].n1 - b.edge_frames[e].n1).is_zero());
    CHECK((a.edge_frames[e].n2 - b.edge_frames[e].n2).is_zero());
  }
  for (int f = 0; f < a.count(2); ++f) CHECK((a.face_frames[f].n - b.face_frames[f].n).is_zero());
}

TEST_CASE("frames are orthogonal, oriented, and attached to sub-simplices") {
  Mesh m = build_mesh("cube6");
  for (int e = 0; e < m.count(1); ++e) {
    EdgeFrame fr = edge_frame(m, e);
    const auto& ev = m.verts_of(1, e);
    CHECK((fr.t - (m.vertices[ev[1]] - m.vertices[ev[0]])).is_zero());
    CHECK(dot(fr.t, fr.n1) == 0);
    CHECK(dot(fr.t, fr.n2) == 0);
    CHECK(dot(fr.n1, fr.n2) == 0);
    // Incident-face normals are orthogonal to the edge tangent.
    for (const Vec3& nf : m.incident_face_normals[e]) CHECK(dot(fr.t, nf) == 0);
    CHECK(m.incident_face_normals[e].size() >= 2);
  }
  for (int f = 0; f < m.count(2); ++f) {
    FaceFrame fr = face_frame(m, f);
    CHECK(dot(fr.t1, fr.t2) == 0);
    CHECK(dot(fr.t1, fr.n) == 0);
    CHECK(dot(fr.t2, fr.n) == 0);
    // Right-handed: t1 x t2 is a positive multiple of n.
    Vec3 c = cross(fr.t1, fr.t2);
    CHECK((c - fr.n * dot(fr.t1, fr.t1)).is_zero());
    // The frame is identical regardless of which incident tet asks.
    for (int t : m.tets_of[2][f]) {
      (void)t;
      FaceFrame again = face_frame(m, f);
      CHECK((again.n - fr.n).is_zero());
    }
  }
  CHECK_THROWS_AS(subsimplex_frame(m, 0, 0), std::invalid_argument);
  CHECK_THROWS_AS(subsimplex_frame(m, 3, 0), std::invalid_argument);
  CHECK(std::holds_alternative<EdgeFrame>(subsimplex_frame(m, 1, 0)));
  CHECK(std::holds_alternative<FaceFrame>(subsimplex_frame(m, 2, 0)));
}

TEST_CASE("edge frames feed the tangential/normal decompositions") {
  Mesh m = build_mesh("two_tets");
  for (int e = 0; e < m.count(1); ++e) {
    TnBasis b = tn_basis(TensorClass::S, SubKind::edge, TnVariant::div, edge_frame(m, e));
    CHECK(tn_total_rank(b) == 6);
  }
  for (int f = 0; f < m.count(2); ++f) {
    TnBasis b = tn_basis(TensorClass::T, SubKind::face, TnVariant::div, face_frame(m, f));
    CHECK(tn_total_rank(b) == 8);
  }
}

TEST_CASE("geometry accessors give exact measures") {
  Mesh m = build_mesh("ref_tet");
  CHECK(m.tet_geometry(0)->measure2 == make_rat(1, 36));  // volume 1/6
  // Edge {0,1} has length 1.
  int e01 = -1;
  for (int e = 0; e < m.count(1); ++e)
    if (m.verts_of(1, e) == std::vector<int>{0, 1}) e01 = e;
  REQUIRE(e01 >= 0);
  CHECK(m.geometry(1, e01)->measure2 == 1);
}

TEST_CASE("mesh text parser round-trips and rejects malformed input") {
  std::istringstream good(
      "# comment\n"
      "v 0 0 0\n"
      "v 1 0 0\n"
      "v 0 1 0\n"
      "v 0 0 1/2\n"
      "t 0 1 2 3  # trailing comment\n");
  Mesh m = parse_mesh_text(good);
  CHECK(m.count(3) == 1);
  CHECK(m.vertices[3][2] == make_rat(1, 2));

  auto expect_bad = [](const std::string& text) {
    std::istringstream in(text);
    CHECK_THROWS_AS(parse_mesh_text(in), std::invalid_argument);
  };
  expect_bad("v 0 0\n");                                  // missing coordinate
  expect_bad("v 0 0 zebra\nv 1 0 0\n");                   // unparsable rational
  expect_bad("x 1 2 3\n");                                // unknown tag
  expect_bad("v 0 0 0\nv 1 0 0\nv 0 1 0\nv 0 0 1\nt 0 1 2 3 4\n");  // extra token
  expect_bad("v 0 0 0\nv 1 0 0\nv 0 1 0\nv 0 0 1\nt 0 1 2\n");      // short tet
  expect_bad("v 0 0 0\nv 1 0 0\nv 0 1 0\nv 0 0 1\nt 0 1 2 9\n");    // id out of range
}

TEST_CASE("degenerate and non-conforming inputs are rejected") {
  // Zero-volume tet.
  CHECK_THROWS_AS(
      build_mesh({Vec3{0, 0, 0}, Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{1, 1, 0}}, {{0, 1, 2, 3}}),
      std::invalid_argument);
  // Duplicate vertex coordinates.
  CHECK_THROWS_AS(
      build_mesh({Vec3{0, 0, 0}, Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{0, 0, 1}, Vec3{0, 0, 1}},
                 {{0, 1, 2, 3}, {0, 1, 2, 4}}),
      std::invalid_argument);
  // Repeated vertex id within a tet.
  CHECK_THROWS_AS(build_mesh({Vec3{0, 0, 0}, Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{0, 0, 1}},
                             {{0, 1, 2, 2}}),
                  std::invalid_argument);
  // Hanging vertex: the apex of one tet sits on a face of the other.
  CHECK_THROWS_AS(build_mesh({Vec3{0, 0, 0}, Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{0, 0, 1},
                              Vec3{make_rat(1, 4), make_rat(1, 4), 0}},
                             {{0, 1, 2, 3}, {0, 1, 4, 3}}),
                  std::invalid_argument);
  // Duplicate tet.
  CHECK_THROWS_AS(build_mesh({Vec3{0, 0, 0}, Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{0, 0, 1}},
                             {{0, 1, 2, 3}, {3, 2, 1, 0}}),
                  std::invalid_argument);
}
