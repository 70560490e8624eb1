#pragma once

// Test-side helpers. Everything here is computed from raw coordinates and
// connectivity, independently of the library's assembly paths.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "mhd/assembly/discretization.hpp"
#include "mhd/derham.hpp"
#include "mhd/linalg/sparse.hpp"
#include "mhd/mesh.hpp"

namespace testing {

using mhd::Vec3;

inline Eigen::MatrixXd dense(const mhd::linalg::SparseMatrix& a) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i) {
    for (int p = a.row_ptr()[i]; p < a.row_ptr()[i + 1]; ++p) m(i, a.col_idx()[p]) += a.values()[p];
  }
  return m;
}

inline Eigen::MatrixXi dense(const mhd::IncidenceMatrix& a) {
  Eigen::MatrixXi m = Eigen::MatrixXi::Zero(a.rows, a.cols);
  for (int i = 0; i < a.rows; ++i) {
    for (int p = a.row_ptr[i]; p < a.row_ptr[i + 1]; ++p) m(i, a.col[p]) += a.val[p];
  }
  return m;
}

inline Eigen::VectorXd as_eigen(std::span<const double> x) {
  return Eigen::Map<const Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(x.size()));
}

inline std::vector<double> random_vector(std::size_t n, std::uint32_t seed, double lo = -1.0, double hi = 1.0) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> x(n);
  for (double& v : x) v = dist(gen);
  return x;
}

/// Random vector that vanishes where `mask` is set.
inline std::vector<double> random_interior(std::span<const std::uint8_t> mask, std::uint32_t seed) {
  auto x = random_vector(mask.size(), seed);
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (mask[i]) x[i] = 0.0;
  }
  return x;
}

inline double max_abs(std::span<const double> x) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  return m;
}

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Rank over GF(p) by exact modular elimination; equals the rational rank for
// these unimodular incidence matrices.
inline int modular_rank(const Eigen::MatrixXi& m) {
  const std::int64_t p = 2147483647;
  std::vector<std::vector<std::int64_t>> a(m.rows(), std::vector<std::int64_t>(m.cols()));
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) a[i][j] = ((m(i, j) % p) + p) % p;
  }
  auto inverse = [&](std::int64_t x) {
    std::int64_t r = 1, e = p - 2;
    while (e > 0) {
      if (e & 1) r = r * x % p;
      x = x * x % p;
      e >>= 1;
    }
    return r;
  };
  int rank = 0;
  for (int c = 0; c < m.cols() && rank < m.rows(); ++c) {
    int piv = -1;
    for (int r = rank; r < m.rows(); ++r) {
      if (a[r][c] != 0) {
        piv = r;
        break;
      }
    }
    if (piv < 0) continue;
    std::swap(a[piv], a[rank]);
    const std::int64_t inv = inverse(a[rank][c]);
    for (int r = rank + 1; r < m.rows(); ++r) {
      if (a[r][c] == 0) continue;
      const std::int64_t f = a[r][c] * inv % p;
      for (int j = c; j < m.cols(); ++j) a[r][j] = ((a[r][j] - f * a[rank][j]) % p + p) % p;
    }
    ++rank;
  }
  return rank;
}

/// Signed volume of the tet with vertices a, b, c, d.
inline double signed_volume(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
  return (b - a).cross(c - a).dot(d - a) / 6.0;
}

/// Area-weighted normal (x_b - x_a) x (x_c - x_a) / 2 of a sorted face.
inline Vec3 face_normal(const mhd::TetMesh& mesh, int f) {
  const auto& v = mesh.faces[f];
  const Vec3& a = mesh.vertices[v[0]];
  return 0.5 * (mesh.vertices[v[1]] - a).cross(mesh.vertices[v[2]] - a);
}

inline Vec3 tet_centroid(const mhd::TetMesh& mesh, int t) {
  Vec3 c = Vec3::Zero();
  for (int v : mesh.tets[t]) c += mesh.vertices[v];
  return 0.25 * c;
}

inline Vec3 face_centroid(const mhd::TetMesh& mesh, int f) {
  Vec3 c = Vec3::Zero();
  for (int v : mesh.faces[f]) c += mesh.vertices[v];
  return c / 3.0;
}

/// +1 if the oriented normal of face f points out of tet t.
inline int outward_sign(const mhd::TetMesh& mesh, int t, int f) {
  return face_normal(mesh, f).dot(face_centroid(mesh, f) - tet_centroid(mesh, t)) > 0.0 ? 1 : -1;
}

/// Cellwise divergence of RT0 fluxes from geometric outward signs.
inline std::vector<double> geometric_div(const mhd::TetMesh& mesh, std::span<const double> b) {
  std::vector<double> div(mesh.num_tets(), 0.0);
  for (int t = 0; t < mesh.num_tets(); ++t) {
    const auto& v = mesh.tets[t];
    const double vol = std::abs(signed_volume(mesh.vertices[v[0]], mesh.vertices[v[1]], mesh.vertices[v[2]],
                                              mesh.vertices[v[3]]));
    double s = 0.0;
    for (int f : mesh.tet_faces[t]) s += outward_sign(mesh, t, f) * b[f];
    div[t] = s / vol;
  }
  return div;
}

/// Edge circulation of a field of degree <= 2 by Simpson's rule (exact there).
template <class F>
double simpson_circulation(const mhd::TetMesh& mesh, int e, const F& field) {
  const Vec3& a = mesh.vertices[mesh.edges[e][0]];
  const Vec3& b = mesh.vertices[mesh.edges[e][1]];
  const Vec3 t = b - a;
  return t.dot(field(a) + 4.0 * field(0.5 * (a + b)) + field(b)) / 6.0;
}

/// Face flux of a field of degree <= 2 by the edge-midpoint rule (exact there).
template <class F>
double midpoint_flux(const mhd::TetMesh& mesh, int f, const F& field) {
  const auto& v = mesh.faces[f];
  const Vec3& a = mesh.vertices[v[0]];
  const Vec3& b = mesh.vertices[v[1]];
  const Vec3& c = mesh.vertices[v[2]];
  const Vec3 n = face_normal(mesh, f);
  return n.dot(field(0.5 * (a + b)) + field(0.5 * (b + c)) + field(0.5 * (a + c))) / 3.0;
}

/// Sum over tets and quadrature points of w_q * f(ctx, q).
template <class F>
double integrate(const mhd::Discretization& disc, int degree, F&& f) {
  double s = 0.0;
  for (int t = 0; t < disc.num_tets(); ++t) {
    const mhd::ElementContext ctx = mhd::make_element_context(disc, t, degree);
    for (int q = 0; q < ctx.num_points(); ++q) s += ctx.weight[q] * f(ctx, q);
  }
  return s;
}

}  // namespace testing
