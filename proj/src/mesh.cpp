#include "mhd/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace mhd {

namespace {

template <std::size_t N>
int find_sorted(const std::vector<std::array<int, N>>& table, const std::array<int, N>& key) {
  auto it = std::lower_bound(table.begin(), table.end(), key);
  return static_cast<int>(it - table.begin());
}

template <std::size_t N>
void sort_unique(std::vector<std::array<int, N>>& table) {
  std::sort(table.begin(), table.end());
  table.erase(std::unique(table.begin(), table.end()), table.end());
}

}  // namespace

EntityTables extract_entities(std::span<const std::array<int, 4>> tets) {
  EntityTables out;
  for (const auto& t : tets) {
    if (!(t[0] < t[1] && t[1] < t[2] && t[2] < t[3])) {
      throw std::invalid_argument("extract_entities: tet vertices must be strictly increasing");
    }
  }
  {
    std::vector<std::array<int, 4>> sorted(tets.begin(), tets.end());
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw std::invalid_argument("extract_entities: duplicate tet");
    }
  }

  out.edges.reserve(tets.size() * 6);
  out.faces.reserve(tets.size() * 4);
  for (const auto& t : tets) {
    for (const auto& e : kLocalEdges) out.edges.push_back({t[e[0]], t[e[1]]});
    for (const auto& f : kLocalFaces) out.faces.push_back({t[f[0]], t[f[1]], t[f[2]]});
  }
  sort_unique(out.edges);
  sort_unique(out.faces);

  out.tet_edges.resize(tets.size());
  out.tet_faces.resize(tets.size());
  out.tet_edge_signs.resize(tets.size());
  out.tet_face_signs.resize(tets.size());
  out.face_tet_count.assign(out.faces.size(), 0);
  for (std::size_t k = 0; k < tets.size(); ++k) {
    const auto& t = tets[k];
    for (int i = 0; i < 6; ++i) {
      const std::array<int, 2> local{t[kLocalEdges[i][0]], t[kLocalEdges[i][1]]};
      out.tet_edges[k][i] = find_sorted(out.edges, local);
      out.tet_edge_signs[k][i] = local[0] < local[1] ? 1 : -1;
    }
    for (int m = 0; m < 4; ++m) {
      const std::array<int, 3> local{t[kLocalFaces[m][0]], t[kLocalFaces[m][1]], t[kLocalFaces[m][2]]};
      const int f = find_sorted(out.faces, local);
      out.tet_faces[k][m] = f;
      out.tet_face_signs[k][m] = 1;
      ++out.face_tet_count[f];
    }
  }
  return out;
}

BoundaryFlags boundary_flags(const TetMesh& mesh) {
  BoundaryFlags flags;
  flags.vertex.assign(mesh.vertices.size(), 0);
  flags.edge.assign(mesh.edges.size(), 0);
  flags.face.assign(mesh.faces.size(), 0);
  for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
    if (mesh.face_tet_count[f] == 1) flags.face[f] = 1;
  }
  // Edges of a boundary face are boundary edges. Look them up through the tets
  // that own the boundary faces, which avoids a separate face->edge table.
  for (std::size_t t = 0; t < mesh.tets.size(); ++t) {
    for (int m = 0; m < 4; ++m) {
      const int f = mesh.tet_faces[t][m];
      if (!flags.face[f]) continue;
      for (int i = 0; i < 6; ++i) {
        const auto& e = kLocalEdges[i];
        if (e[0] != m && e[1] != m) flags.edge[mesh.tet_edges[t][i]] = 1;
      }
      for (int v : mesh.faces[f]) flags.vertex[v] = 1;
    }
  }
  return flags;
}

double TetMesh::mesh_size() const {
  double h = 0.0;
  for (const auto& e : edges) h = std::max(h, (vertices[e[1]] - vertices[e[0]]).norm());
  return h;
}

TetMesh make_mesh(std::vector<Vec3> vertices, std::vector<std::array<int, 4>> tets, Box box) {
  TetMesh mesh;
  mesh.box = box;
  mesh.vertices = std::move(vertices);
  mesh.tets = std::move(tets);
  for (const auto& t : mesh.tets) {
    for (int v : t) {
      if (v < 0 || v >= mesh.num_vertices()) throw std::invalid_argument("make_mesh: vertex index out of range");
    }
  }

  EntityTables tables = extract_entities(mesh.tets);
  mesh.edges = std::move(tables.edges);
  mesh.faces = std::move(tables.faces);
  mesh.tet_edges = std::move(tables.tet_edges);
  mesh.tet_faces = std::move(tables.tet_faces);
  mesh.tet_edge_signs = std::move(tables.tet_edge_signs);
  mesh.tet_face_signs = std::move(tables.tet_face_signs);
  mesh.face_tet_count = std::move(tables.face_tet_count);

  mesh.tet_volumes.resize(mesh.tets.size());
  mesh.tet_orientation.resize(mesh.tets.size());
  for (std::size_t k = 0; k < mesh.tets.size(); ++k) {
    const auto& t = mesh.tets[k];
    Mat3 J;
    J.col(0) = mesh.vertices[t[1]] - mesh.vertices[t[0]];
    J.col(1) = mesh.vertices[t[2]] - mesh.vertices[t[0]];
    J.col(2) = mesh.vertices[t[3]] - mesh.vertices[t[0]];
    const double det = J.determinant();
    const double scale = J.col(0).norm() * J.col(1).norm() * J.col(2).norm();
    if (!(std::abs(det) > 1e-14 * scale)) throw std::invalid_argument("make_mesh: degenerate tet");
    mesh.tet_volumes[k] = std::abs(det) / 6.0;
    mesh.tet_orientation[k] = det > 0 ? 1 : -1;
  }

  for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
    if (mesh.face_tet_count[f] > 2) throw std::invalid_argument("make_mesh: non-manifold face");
  }

  BoundaryFlags flags = boundary_flags(mesh);
  mesh.boundary_vertex = std::move(flags.vertex);
  mesh.boundary_edge = std::move(flags.edge);
  mesh.boundary_face = std::move(flags.face);
  return mesh;
}

TetMesh generate_structured_cube(int n, const Box& box) {
  if (n < 1) throw std::invalid_argument("generate_structured_cube: n must be >= 1");
  if (!(box.lx > 0 && box.ly > 0 && box.lz > 0)) {
    throw std::invalid_argument("generate_structured_cube: box extents must be positive");
  }
  const int m = n + 1;
  std::vector<Vec3> vertices;
  vertices.reserve(static_cast<std::size_t>(m) * m * m);
  for (int k = 0; k < m; ++k) {
    for (int j = 0; j < m; ++j) {
      for (int i = 0; i < m; ++i) {
        vertices.emplace_back(box.lx * i / n, box.ly * j / n, box.lz * k / n);
      }
    }
  }

  // Walking from the low corner to the high corner of a cell along the axes in
  // any order gives strictly increasing vertex indices, so each Kuhn tet is
  // already sorted.
  const std::array<int, 3> stride{1, m, m * m};
  constexpr std::array<std::array<int, 3>, 6> perms{{
      {0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};
  std::vector<std::array<int, 4>> tets;
  tets.reserve(static_cast<std::size_t>(6) * n * n * n);
  for (int k = 0; k < n; ++k) {
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        const int base = i + m * (j + m * k);
        for (const auto& p : perms) {
          std::array<int, 4> t{};
          t[0] = base;
          t[1] = t[0] + stride[p[0]];
          t[2] = t[1] + stride[p[1]];
          t[3] = t[2] + stride[p[2]];
          tets.push_back(t);
        }
      }
    }
  }
  return make_mesh(std::move(vertices), std::move(tets), box);
}

std::vector<int> flagged_indices(std::span<const std::uint8_t> flags) {
  std::vector<int> out;
  for (std::size_t i = 0; i < flags.size(); ++i) {
    if (flags[i]) out.push_back(static_cast<int>(i));
  }
  return out;
}

std::string summary(const TetMesh& mesh) {
  std::ostringstream os;
  os << "box            " << mesh.box.lx << " x " << mesh.box.ly << " x " << mesh.box.lz << "\n"
     << "vertices       " << mesh.num_vertices() << " (" << flagged_indices(mesh.boundary_vertex).size()
     << " boundary)\n"
     << "edges          " << mesh.num_edges() << " (" << flagged_indices(mesh.boundary_edge).size()
     << " boundary)\n"
     << "faces          " << mesh.num_faces() << " (" << flagged_indices(mesh.boundary_face).size()
     << " boundary)\n"
     << "tets           " << mesh.num_tets() << "\n"
     << "euler          " << mesh.euler_characteristic() << "\n"
     << "h (max edge)   " << mesh.mesh_size() << "\n";
  return os.str();
}

}  // namespace mhd
