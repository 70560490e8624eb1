#include "mhd/fem/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace mhd::fem {

TetGeometry TetGeometry::from_vertices(const std::array<Vec3, 4>& x) {
  TetGeometry g;
  g.x = x;
  g.J.col(0) = x[1] - x[0];
  g.J.col(1) = x[2] - x[0];
  g.J.col(2) = x[3] - x[0];
  g.det = g.J.determinant();
  const double scale = g.J.col(0).norm() * g.J.col(1).norm() * g.J.col(2).norm();
  if (!(std::abs(g.det) > 1e-14 * scale)) throw std::invalid_argument("TetGeometry: degenerate tetrahedron");
  g.Jinv = g.J.inverse();
  g.volume = std::abs(g.det) / 6.0;
  const Mat3 JinvT = g.Jinv.transpose();
  g.grad_lambda[1] = JinvT.col(0);
  g.grad_lambda[2] = JinvT.col(1);
  g.grad_lambda[3] = JinvT.col(2);
  g.grad_lambda[0] = -(g.grad_lambda[1] + g.grad_lambda[2] + g.grad_lambda[3]);
  return g;
}

std::vector<TetGeometry> compute_geometry(const TetMesh& mesh) {
  std::vector<TetGeometry> out;
  out.reserve(mesh.tets.size());
  for (const auto& t : mesh.tets) {
    out.push_back(TetGeometry::from_vertices(
        {mesh.vertices[t[0]], mesh.vertices[t[1]], mesh.vertices[t[2]], mesh.vertices[t[3]]}));
  }
  return out;
}

}  // namespace mhd::fem
