#include "mhd/fem/quadrature.hpp"

#include <array>
#include <cmath>
#include <mutex>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace mhd::fem {

namespace {

void add_permutations_1_3(QuadratureRule& r, double a, double b, double w) {
  // Barycentric (a, b, b, b) and its 4 permutations.
  const std::array<Eigen::Vector4d, 4> bary{
      Eigen::Vector4d(a, b, b, b), Eigen::Vector4d(b, a, b, b), Eigen::Vector4d(b, b, a, b),
      Eigen::Vector4d(b, b, b, a)};
  for (const auto& l : bary) {
    r.points.emplace_back(l[1], l[2], l[3]);
    r.weights.push_back(w);
  }
}

void add_permutations_2_2(QuadratureRule& r, double a, double b, double w) {
  // Barycentric (a, a, b, b) and its 6 distinct permutations.
  const std::array<std::array<int, 2>, 6> pairs{{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};
  for (const auto& p : pairs) {
    Eigen::Vector4d l = Eigen::Vector4d::Constant(b);
    l[p[0]] = a;
    l[p[1]] = a;
    r.points.emplace_back(l[1], l[2], l[3]);
    r.weights.push_back(w);
  }
}

QuadratureRule conical_product(int degree) {
  const int q = (degree + 2) / 2;
  const LineRule ru = gauss_jacobi(q, 2.0);
  const LineRule rv = gauss_jacobi(q, 1.0);
  const LineRule rw = gauss_jacobi(q, 0.0);
  QuadratureRule r;
  r.degree = degree;
  for (int i = 0; i < q; ++i) {
    for (int j = 0; j < q; ++j) {
      for (int k = 0; k < q; ++k) {
        const double u = ru.points[i];
        const double v = rv.points[j];
        const double w = rw.points[k];
        r.points.emplace_back(u, v * (1.0 - u), w * (1.0 - u) * (1.0 - v));
        r.weights.push_back(ru.weights[i] * rv.weights[j] * rw.weights[k]);
      }
    }
  }
  return r;
}

QuadratureRule make_tet_rule(int degree) {
  QuadratureRule r;
  r.degree = degree;
  switch (degree) {
    case 1:
      r.points.emplace_back(0.25, 0.25, 0.25);
      r.weights.push_back(1.0 / 6.0);
      return r;
    case 2:
      add_permutations_1_3(r, 0.5854101966249685, 0.1381966011250105, 1.0 / 24.0);
      return r;
    case 3:
    case 4:
      // Keast 11-point rule (one negative weight).
      r.points.emplace_back(0.25, 0.25, 0.25);
      r.weights.push_back(-74.0 / 5625.0);
      add_permutations_1_3(r, 11.0 / 14.0, 1.0 / 14.0, 343.0 / 45000.0);
      add_permutations_2_2(r, 0.399403576166799219, 0.100596423833200785, 56.0 / 2250.0);
      return r;
    case 5:
    case 6:
      return conical_product(degree);
    default:
      throw std::invalid_argument("tet_quadrature: degree must be in 1..6");
  }
}

TriangleRule make_triangle_rule(int degree) {
  const int q = (degree + 2) / 2;
  const LineRule ru = gauss_jacobi(q, 1.0);
  const LineRule rv = gauss_jacobi(q, 0.0);
  TriangleRule r;
  r.degree = degree;
  for (int i = 0; i < q; ++i) {
    for (int j = 0; j < q; ++j) {
      const double u = ru.points[i];
      r.points.emplace_back(u, rv.points[j] * (1.0 - u));
      r.weights.push_back(ru.weights[i] * rv.weights[j]);
    }
  }
  return r;
}

}  // namespace

Eigen::Vector4d QuadratureRule::barycentric(int q) const {
  const auto& p = points[q];
  return {1.0 - p.x() - p.y() - p.z(), p.x(), p.y(), p.z()};
}

const QuadratureRule& tet_quadrature(int degree) {
  if (degree < 1 || degree > 6) throw std::invalid_argument("tet_quadrature: degree must be in 1..6");
  static std::array<QuadratureRule, 7> cache;
  static std::once_flag once;
  std::call_once(once, [] {
    for (int d = 1; d <= 6; ++d) cache[d] = make_tet_rule(d);
  });
  return cache[degree];
}

const TriangleRule& triangle_quadrature(int degree) {
  if (degree < 1 || degree > 10) throw std::invalid_argument("triangle_quadrature: degree must be in 1..10");
  static std::array<TriangleRule, 11> cache;
  static std::once_flag once;
  std::call_once(once, [] {
    for (int d = 1; d <= 10; ++d) cache[d] = make_triangle_rule(d);
  });
  return cache[degree];
}

LineRule gauss_jacobi(int n, double alpha) {
  if (n < 1) throw std::invalid_argument("gauss_jacobi: n must be >= 1");
  if (!(alpha > -1.0)) throw std::invalid_argument("gauss_jacobi: alpha must be > -1");
  // Jacobi matrix for weight (1 - t)^alpha on [-1, 1] (beta = 0).
  const double a = alpha;
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    const double s = 2.0 * k + a;
    T(k, k) = (k == 0) ? -a / (a + 2.0) : -(a * a) / (s * (s + 2.0));
    if (k + 1 < n) {
      const double m = k + 1;
      const double sm = 2.0 * m + a;
      const double b2 = 4.0 * m * (m + a) * m * (m + a) / (sm * sm * (sm + 1.0) * (sm - 1.0));
      T(k, k + 1) = T(k + 1, k) = std::sqrt(b2);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(T);
  // Total mass of (1 - t)^alpha on [-1, 1] is 2^(alpha+1)/(alpha+1); the map
  // x = (1 + t)/2 rescales it by 2^-(alpha+1).
  const double mass01 = 1.0 / (a + 1.0);
  LineRule r;
  r.points.resize(n);
  r.weights.resize(n);
  for (int k = 0; k < n; ++k) {
    const double v0 = eig.eigenvectors()(0, k);
    r.points[k] = 0.5 * (1.0 + eig.eigenvalues()[k]);
    r.weights[k] = mass01 * v0 * v0;
  }
  return r;
}

double tet_monomial_integral(int a, int b, int c) {
  const double num = std::tgamma(a + 1.0) * std::tgamma(b + 1.0) * std::tgamma(c + 1.0);
  return num / std::tgamma(a + b + c + 4.0);
}

}  // namespace mhd::fem
