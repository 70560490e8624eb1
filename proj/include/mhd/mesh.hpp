#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace mhd {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Axis-aligned box [0, lx] x [0, ly] x [0, lz].
struct Box {
  double lx = 1.0;
  double ly = 1.0;
  double lz = 1.0;

  double volume() const { return lx * ly * lz; }
};

/// Local edge (a, b) of a tetrahedron in terms of its sorted local vertices.
inline constexpr std::array<std::array<int, 2>, 6> kLocalEdges{{
    {0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

/// Local face m is the face opposite local vertex m.
inline constexpr std::array<std::array<int, 3>, 4> kLocalFaces{{
    {1, 2, 3}, {0, 2, 3}, {0, 1, 3}, {0, 1, 2}}};

/// Edge/face tables and tet connectivity derived from a list of sorted tets.
struct EntityTables {
  std::vector<std::array<int, 2>> edges;  // lexicographically sorted
  std::vector<std::array<int, 3>> faces;  // lexicographically sorted
  std::vector<std::array<int, 6>> tet_edges;
  std::vector<std::array<int, 4>> tet_faces;
  // Orientation of each local entity relative to its global copy. With sorted
  // storage every entry is +1.
  std::vector<std::array<std::int8_t, 6>> tet_edge_signs;
  std::vector<std::array<std::int8_t, 4>> tet_face_signs;
  std::vector<int> face_tet_count;
};

/// Builds the entity tables. Every tet must be strictly increasing; a repeated
/// tet throws std::invalid_argument.
EntityTables extract_entities(std::span<const std::array<int, 4>> tets);

/// Conforming tetrahedral mesh with globally sorted entity orientation.
/// Immutable after construction.
struct TetMesh {
  Box box;
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 4>> tets;
  std::vector<std::array<int, 2>> edges;
  std::vector<std::array<int, 3>> faces;
  std::vector<std::array<int, 6>> tet_edges;
  std::vector<std::array<int, 4>> tet_faces;
  std::vector<std::array<std::int8_t, 6>> tet_edge_signs;
  std::vector<std::array<std::int8_t, 4>> tet_face_signs;
  std::vector<int> face_tet_count;
  std::vector<double> tet_volumes;
  std::vector<std::int8_t> tet_orientation;  // sign of det of the vertex Jacobian

  std::vector<std::uint8_t> boundary_vertex;
  std::vector<std::uint8_t> boundary_edge;
  std::vector<std::uint8_t> boundary_face;

  int num_vertices() const { return static_cast<int>(vertices.size()); }
  int num_edges() const { return static_cast<int>(edges.size()); }
  int num_faces() const { return static_cast<int>(faces.size()); }
  int num_tets() const { return static_cast<int>(tets.size()); }

  int euler_characteristic() const {
    return num_vertices() - num_edges() + num_faces() - num_tets();
  }

  /// Longest edge length.
  double mesh_size() const;
};

/// Boundary vertex/edge/face flags. A face is on the boundary iff it belongs
/// to exactly one tet; edges and vertices inherit from boundary faces.
struct BoundaryFlags {
  std::vector<std::uint8_t> vertex;
  std::vector<std::uint8_t> edge;
  std::vector<std::uint8_t> face;
};

BoundaryFlags boundary_flags(const TetMesh& mesh);

/// Builds a mesh from raw vertices and sorted tets (entity tables, volumes and
/// boundary flags are derived). Throws on degenerate or unsorted tets.
TetMesh make_mesh(std::vector<Vec3> vertices, std::vector<std::array<int, 4>> tets, Box box);

/// Kuhn subdivision of an n x n x n grid of boxes: each cell is split into six
/// tets sharing its main diagonal.
TetMesh generate_structured_cube(int n, const Box& box = Box{});

/// Indices of the set flags.
std::vector<int> flagged_indices(std::span<const std::uint8_t> flags);

std::string summary(const TetMesh& mesh);

}  // namespace mhd
