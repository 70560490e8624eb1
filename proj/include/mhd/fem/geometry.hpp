#pragma once

#include <array>
#include <vector>

#include "mhd/mesh.hpp"

namespace mhd::fem {

/// Affine map x = x0 + J * xi from the reference tetrahedron onto a physical
/// tetrahedron, with the derived quantities every assembly loop needs.
struct TetGeometry {
  std::array<Vec3, 4> x;
  Mat3 J;
  Mat3 Jinv;
  double det = 0.0;     // signed
  double volume = 0.0;  // |det| / 6
  std::array<Vec3, 4> grad_lambda;  // physical gradients of the barycentric coordinates

  Vec3 map(const Vec3& xi) const { return x[0] + J * xi; }
  Vec3 barycenter() const { return 0.25 * (x[0] + x[1] + x[2] + x[3]); }

  /// Throws std::invalid_argument for a degenerate tetrahedron.
  static TetGeometry from_vertices(const std::array<Vec3, 4>& x);
};

std::vector<TetGeometry> compute_geometry(const TetMesh& mesh);

}  // namespace mhd::fem
