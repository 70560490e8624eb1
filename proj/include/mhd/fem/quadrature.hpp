#pragma once

#include <vector>

#include <Eigen/Core>

namespace mhd::fem {

/// Quadrature on the reference tetrahedron {x, y, z >= 0, x + y + z <= 1}.
/// Points are reference coordinates; barycentric coordinates are
/// (1 - x - y - z, x, y, z). Weights sum to 1/6.
struct QuadratureRule {
  int degree = 0;
  std::vector<Eigen::Vector3d> points;
  std::vector<double> weights;

  int size() const { return static_cast<int>(weights.size()); }
  Eigen::Vector4d barycentric(int q) const;
};

/// Rule exact for polynomials of total degree <= `degree` (1..6).
/// Throws std::invalid_argument otherwise.
const QuadratureRule& tet_quadrature(int degree);

/// Quadrature on the reference triangle {s, t >= 0, s + t <= 1}; weights sum
/// to 1/2.
struct TriangleRule {
  int degree = 0;
  std::vector<Eigen::Vector2d> points;
  std::vector<double> weights;

  int size() const { return static_cast<int>(weights.size()); }
};

/// Collapsed Gauss-Jacobi triangle rule exact to `degree` (1..10).
const TriangleRule& triangle_quadrature(int degree);

/// 1D rule on [0, 1] with weight (1 - x)^alpha.
struct LineRule {
  std::vector<double> points;
  std::vector<double> weights;

  int size() const { return static_cast<int>(weights.size()); }
};

/// Gauss-Jacobi rule with `n` points for the weight (1 - x)^alpha on [0, 1]
/// (Golub-Welsch). alpha = 0 gives Gauss-Legendre.
LineRule gauss_jacobi(int n, double alpha);
inline LineRule gauss_legendre(int n) { return gauss_jacobi(n, 0.0); }

/// Exact integral of x^a y^b z^c over the reference tetrahedron:
/// a! b! c! / (a + b + c + 3)!.
double tet_monomial_integral(int a, int b, int c);

}  // namespace mhd::fem
