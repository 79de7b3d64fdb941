#ifndef TETFEC_MESH_HPP
#define TETFEC_MESH_HPP

/// Small conforming tetrahedral meshes with full sub-simplex incidence and
/// globally consistent rational frames on edges and faces.
///
/// Canonical orientation: the vertex ids of every stored simplex are sorted
/// ascending, and sub-simplex ids are assigned in lexicographic order of
/// their vertex tuples, so rebuilding the same input reproduces identical
/// tables.  Frames are exact rational vectors attached to the sub-simplex
/// (never to an incident element) and are NOT normalized: unit vectors would
/// usually be irrational.  Consumers rely only on spans and orthogonality.

#include <algorithm>
#include <array>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "tetfec/geometry.hpp"
#include "tetfec/tensoralg.hpp"

namespace tetfec {

struct Mesh {
  std::vector<Vec3> vertices;
  /// simplices[d][i] = sorted vertex ids of the i-th d-simplex.
  std::array<std::vector<std::vector<int>>, 4> simplices;
  /// sub_of_tet[d][t][j] = global id of the j-th local d-sub-simplex of tet t,
  /// local subsets of {0,1,2,3} enumerated in lexicographic order.
  std::array<std::vector<std::vector<int>>, 3> sub_of_tet;
  /// tets_of[d][s] = ids of tets incident to d-simplex s (ascending).
  std::array<std::vector<std::vector<int>>, 3> tets_of;

  std::vector<EdgeFrame> edge_frames;
  std::vector<FaceFrame> face_frames;
  /// incident_face_normals[e] = face normals n_f of the faces containing e,
  /// in ascending face-id order (the {n_f1, n_f2, t_e} style edge frame).
  std::vector<std::vector<Vec3>> incident_face_normals;

  int count(int dim) const { return static_cast<int>(simplices[dim].size()); }

  const std::vector<int>& verts_of(int dim, int id) const { return simplices[dim][id]; }

  GeomPtr geometry(int dim, int id) const {
    std::vector<Vec3> pts;
    for (int v : simplices[dim][id]) pts.push_back(vertices[v]);
    return make_geom(pts);
  }

  GeomPtr tet_geometry(int t) const { return geometry(3, t); }

  /// Local index (within tet t's lexicographic local enumeration) of the
  /// global d-sub-simplex s, or -1 when s is not a sub-simplex of t.
  int local_index(int dim, int s, int t) const {
    const auto& row = sub_of_tet[dim][t];
    for (int j = 0; j < static_cast<int>(row.size()); ++j)
      if (row[j] == s) return j;
    return -1;
  }

  /// Positions of the sub-simplex's vertices inside tet t's vertex list,
  /// e.g. face {v0,v2,v3} of tet (v0..v3) -> {0,2,3}.  Used to restrict
  /// polynomials to the sub-simplex.
  std::vector<int> local_vertex_slots(int dim, int s, int t) const {
    const auto& tv = simplices[3][t];
    std::vector<int> slots;
    for (int v : simplices[dim][s]) {
      int pos = -1;
      for (int i = 0; i < 4; ++i)
        if (tv[i] == v) pos = i;
      if (pos < 0) throw std::invalid_argument("local_vertex_slots: not a sub-simplex of the tet");
      slots.push_back(pos);
    }
    return slots;
  }

  bool is_boundary_face(int f) const { return tets_of[2][f].size() == 1; }
};

inline int euler_characteristic(const Mesh& m) {
  return m.count(0) - m.count(1) + m.count(2) - m.count(3);
}

namespace detail {

/// All (dim+1)-subsets of {0,1,2,3} in lexicographic order.
inline const std::vector<std::vector<int>>& local_subsets(int dim) {
  static const std::array<std::vector<std::vector<int>>, 3> tables = {
      std::vector<std::vector<int>>{{0}, {1}, {2}, {3}},
      std::vector<std::vector<int>>{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}},
      std::vector<std::vector<int>>{{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}}};
  return tables[dim];
}

inline EdgeFrame build_edge_frame(const Vec3& a, const Vec3& b) {
  Vec3 t = b - a;
  // Deterministic first normal: a fixed reference vector orthogonalized
  // against t, falling back when parallel.
  const Vec3 refs[2] = {Vec3{1, 0, 0}, Vec3{0, 1, 0}};
  Vec3 n1;
  for (const Vec3& r : refs) {
    n1 = r * dot(t, t) - t * dot(r, t);
    if (!n1.is_zero()) break;
  }
  Vec3 n2 = cross(t, n1);
  EdgeFrame fr{t, n1, n2};
  check_edge_frame(fr);
  return fr;
}

inline FaceFrame build_face_frame(const Vec3& a, const Vec3& b, const Vec3& c) {
  Vec3 t1 = b - a;
  Vec3 n = cross(t1, c - a);
  Vec3 t2 = cross(n, t1);  // t1 x t2 = (t1.t1) n: right-handed
  FaceFrame fr{t1, t2, n};
  check_face_frame(fr);
  return fr;
}

}  // namespace detail

/// Build a mesh from explicit vertices and tets.  Vertex ids inside each tet
/// are sorted; duplicate vertices, degenerate tets, faces shared by more
/// than two tets, and vertices lying inside another closed tet are rejected.
inline Mesh build_mesh(std::vector<Vec3> vertices, std::vector<std::array<int, 4>> tets) {
  Mesh m;
  m.vertices = std::move(vertices);
  const int nv = static_cast<int>(m.vertices.size());
  for (int i = 0; i < nv; ++i)
    for (int j = i + 1; j < nv; ++j)
      if ((m.vertices[i] - m.vertices[j]).is_zero())
        throw std::invalid_argument("build_mesh: duplicate vertex coordinates");

  std::set<std::vector<int>> tet_set;
  for (auto t : tets) {
    std::vector<int> tv(t.begin(), t.end());
    std::sort(tv.begin(), tv.end());
    if (std::unique(tv.begin(), tv.end()) != tv.end() || tv.front() < 0 || tv.back() >= nv)
      throw std::invalid_argument("build_mesh: bad tet vertex ids");
    if (!tet_set.insert(tv).second) throw std::invalid_argument("build_mesh: duplicate tet");
    std::vector<Vec3> pts;
    for (int v : tv) pts.push_back(m.vertices[v]);
    make_geom(pts);  // throws on zero volume
    m.simplices[3].push_back(tv);
  }
  if (m.simplices[3].empty()) throw std::invalid_argument("build_mesh: no tets");

  // Collect sub-simplices with lexicographically ordered ids.
  for (int d = 0; d < 3; ++d) {
    std::map<std::vector<int>, int> ids;
    for (const auto& tv : m.simplices[3])
      for (const auto& sub : detail::local_subsets(d)) {
        std::vector<int> key;
        for (int j : sub) key.push_back(tv[j]);
        ids.emplace(key, 0);
      }
    int next = 0;
    for (auto& [key, id] : ids) {
      id = next++;
      m.simplices[d].push_back(key);
    }
    m.sub_of_tet[d].resize(m.simplices[3].size());
    m.tets_of[d].resize(ids.size());
    for (int t = 0; t < static_cast<int>(m.simplices[3].size()); ++t)
      for (const auto& sub : detail::local_subsets(d)) {
        std::vector<int> key;
        for (int j : sub) key.push_back(m.simplices[3][t][j]);
        int id = ids.at(key);
        m.sub_of_tet[d][t].push_back(id);
        m.tets_of[d][id].push_back(t);
      }
  }

  for (const auto& inc : m.tets_of[2])
    if (inc.size() > 2)
      throw std::invalid_argument("build_mesh: face shared by more than two tets");

  // A vertex of one tet inside another closed tet (without being one of its
  // vertices) signals a hanging node or overlap.
  for (int t = 0; t < m.count(3); ++t) {
    GeomPtr g = m.tet_geometry(t);
    const auto& tv = m.simplices[3][t];
    for (int v = 0; v < nv; ++v) {
      if (std::find(tv.begin(), tv.end(), v) != tv.end()) continue;
      std::vector<Rat> bc = g->barycentric(m.vertices[v]);
      bool inside = true;
      for (const Rat& c : bc)
        if (c < 0) inside = false;
      if (inside) throw std::invalid_argument("build_mesh: non-conforming (vertex inside a tet)");
    }
  }

  for (const auto& ev : m.simplices[1])
    m.edge_frames.push_back(detail::build_edge_frame(m.vertices[ev[0]], m.vertices[ev[1]]));
  for (const auto& fv : m.simplices[2])
    m.face_frames.push_back(
        detail::build_face_frame(m.vertices[fv[0]], m.vertices[fv[1]], m.vertices[fv[2]]));

  m.incident_face_normals.resize(m.count(1));
  for (int e = 0; e < m.count(1); ++e) {
    const auto& ev = m.simplices[1][e];
    for (int f = 0; f < m.count(2); ++f) {
      const auto& fv = m.simplices[2][f];
      bool contains = std::includes(fv.begin(), fv.end(), ev.begin(), ev.end());
      if (contains) m.incident_face_normals[e].push_back(m.face_frames[f].n);
    }
  }
  return m;
}

/// Built-in meshes: "ref_tet", "two_tets" (glued across a shared face), and
/// "cube6" (unit cube, six tets around the main diagonal; corner id 4i+2j+k
/// for coordinates (i,j,k)).
inline Mesh build_mesh(const std::string& name) {
  if (name == "ref_tet") {
    return build_mesh({Vec3{0, 0, 0}, Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{0, 0, 1}},
                      {{0, 1, 2, 3}});
  }
  if (name == "two_tets") {
    return build_mesh(
        {Vec3{0, 0, 0}, Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{0, 0, 1}, Vec3{0, 0, -1}},
        {{0, 1, 2, 3}, {0, 1, 2, 4}});
  }
  if (name == "cube6") {
    std::vector<Vec3> v;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k) v.push_back(Vec3{i, j, k});
    return build_mesh(v, {{0, 1, 3, 7},
                          {0, 1, 5, 7},
                          {0, 2, 3, 7},
                          {0, 2, 6, 7},
                          {0, 4, 5, 7},
                          {0, 4, 6, 7}});
  }
  throw std::invalid_argument("build_mesh: unknown mesh name " + name);
}

/// Plain-text mesh: one "v x y z" line per vertex (rational literals "p/q"
/// allowed) and one "t i j k l" line per tet.  '#' starts a comment.
inline Mesh parse_mesh_text(std::istream& in) {
  std::vector<Vec3> verts;
  std::vector<std::array<int, 4>> tets;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag)) continue;
    auto bad = [&](const std::string& what) {
      throw std::invalid_argument("mesh file line " + std::to_string(lineno) + ": " + what);
    };
    if (tag == "v") {
      std::string sx, sy, sz;
      if (!(ls >> sx >> sy >> sz)) bad("expected 'v x y z'");
      try {
        verts.push_back(Vec3{Rat(sx), Rat(sy), Rat(sz)});
      } catch (const std::exception&) {
        bad("unparsable rational");
      }
    } else if (tag == "t") {
      std::array<int, 4> t{};
      if (!(ls >> t[0] >> t[1] >> t[2] >> t[3])) bad("expected 't i j k l'");
      tets.push_back(t);
    } else {
      bad("unknown tag '" + tag + "'");
    }
    std::string extra;
    if (ls >> extra) bad("trailing tokens");
  }
  return build_mesh(std::move(verts), std::move(tets));
}

inline Mesh load_mesh_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open mesh file " + path);
  return parse_mesh_text(in);
}

/// Frame of an edge (dim 1) or face (dim 2); throws for vertices and tets.
inline EdgeFrame edge_frame(const Mesh& m, int e) { return m.edge_frames.at(e); }
inline FaceFrame face_frame(const Mesh& m, int f) { return m.face_frames.at(f); }

using SubFrame = std::variant<EdgeFrame, FaceFrame>;

inline SubFrame subsimplex_frame(const Mesh& m, int dim, int id) {
  if (dim == 1) return edge_frame(m, id);
  if (dim == 2) return face_frame(m, id);
  throw std::invalid_argument("subsimplex_frame: only edges and faces carry frames");
}

}  // namespace tetfec

#endif
