#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "mhd/derham.hpp"
#include "mhd/fem/basis.hpp"
#include "mhd/fem/geometry.hpp"
#include "mhd/fem/quadrature.hpp"
#include "mhd/mesh.hpp"

namespace mhd {

/// Positions of the unknown blocks in the monolithic vector
/// [u | E | B | p | lambda], where lambda is the mean-pressure multiplier.
struct DofLayout {
  int n_u = 0;
  int n_E = 0;
  int n_B = 0;
  int n_p = 0;
  int off_u = 0;
  int off_E = 0;
  int off_B = 0;
  int off_p = 0;
  int off_lambda = 0;
  int total = 0;
};

/// Reference basis tables of every family at the points of one rule.
struct ReferenceTables {
  const fem::QuadratureRule* rule = nullptr;
  fem::BasisTable p1;
  fem::BasisTable p2;
  fem::BasisTable nd;
  fem::BasisTable rt;
};

/// Mesh, complex, geometry and DOF layout shared by every assembly routine.
/// Velocity DOF for P2 node `i` and component `c` is 3 i + c, with nodes
/// numbered vertices first and then edge midpoints (num_vertices + edge).
class Discretization {
 public:
  explicit Discretization(TetMesh mesh);

  const TetMesh& mesh() const { return mesh_; }
  const DeRhamComplex& complex() const { return complex_; }
  const fem::TetGeometry& geometry(int t) const { return geometry_[t]; }
  const DofLayout& layout() const { return layout_; }
  int num_tets() const { return mesh_.num_tets(); }
  int num_p2_nodes() const { return mesh_.num_vertices() + mesh_.num_edges(); }
  double domain_volume() const { return volume_; }

  std::array<int, 10> p2_nodes(int t) const;
  /// Coordinates of P2 node i.
  Vec3 p2_node_position(int node) const;

  /// Essential-BC masks per block (1 = DOF fixed to zero).
  const std::vector<std::uint8_t>& velocity_mask() const { return velocity_mask_; }
  const std::vector<std::uint8_t>& edge_mask() const { return complex_.boundary_edge; }
  const std::vector<std::uint8_t>& face_mask() const { return complex_.boundary_face; }
  /// Mask over the monolithic vector.
  const std::vector<std::uint8_t>& system_mask() const { return system_mask_; }

  /// Tables for degree 4 (linear operators) or 6 (nonlinear terms).
  const ReferenceTables& tables(int degree) const;

 private:
  TetMesh mesh_;
  DeRhamComplex complex_;
  std::vector<fem::TetGeometry> geometry_;
  DofLayout layout_;
  double volume_ = 0.0;
  std::vector<std::uint8_t> velocity_mask_;
  std::vector<std::uint8_t> system_mask_;
  std::array<std::unique_ptr<ReferenceTables>, 7> tables_;
};

/// Physical basis values of all families on one tet at the points of a rule.
struct ElementContext {
  int tet = -1;
  const fem::QuadratureRule* rule = nullptr;
  std::vector<double> weight;  // quadrature weight times |det J|
  std::vector<Vec3> points;    // physical points
  fem::BasisTable p1;
  fem::BasisTable p2;
  fem::BasisTable nd;
  fem::BasisTable rt;
  std::array<int, 10> p2_nodes{};
  std::array<int, 6> edges{};
  std::array<int, 4> faces{};
  std::array<int, 4> vertices{};

  int num_points() const { return static_cast<int>(weight.size()); }
};

ElementContext make_element_context(const Discretization& disc, int t, int degree);

}  // namespace mhd
