#include "mhd/derham.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "mhd/fem/quadrature.hpp"

namespace mhd {

namespace {

struct RowBuilder {
  IncidenceMatrix m;
  RowBuilder(int rows, int cols) {
    m.rows = rows;
    m.cols = cols;
    m.row_ptr.assign(1, 0);
  }
  // Entries must be pushed per row; they are sorted by column on close.
  void close_row(std::vector<std::pair<int, int>>& entries) {
    std::sort(entries.begin(), entries.end());
    for (const auto& [c, v] : entries) {
      m.col.push_back(c);
      m.val.push_back(v);
    }
    m.row_ptr.push_back(static_cast<int>(m.col.size()));
    entries.clear();
  }
};

int find_edge(const TetMesh& mesh, int a, int b) {
  const std::array<int, 2> key{a, b};
  auto it = std::lower_bound(mesh.edges.begin(), mesh.edges.end(), key);
  if (it == mesh.edges.end() || *it != key) throw std::logic_error("build_complex: missing edge");
  return static_cast<int>(it - mesh.edges.begin());
}

}  // namespace

int IncidenceMatrix::at(int i, int j) const {
  for (int p = row_ptr[i]; p < row_ptr[i + 1]; ++p) {
    if (col[p] == j) return val[p];
  }
  return 0;
}

std::vector<double> IncidenceMatrix::apply(std::span<const double> x) const {
  if (x.size() != static_cast<std::size_t>(cols)) throw std::invalid_argument("IncidenceMatrix::apply: size mismatch");
  std::vector<double> y(rows, 0.0);
  for (int i = 0; i < rows; ++i) {
    double s = 0.0;
    for (int p = row_ptr[i]; p < row_ptr[i + 1]; ++p) s += val[p] * x[col[p]];
    y[i] = s;
  }
  return y;
}

std::vector<double> IncidenceMatrix::apply_transpose(std::span<const double> y) const {
  if (y.size() != static_cast<std::size_t>(rows)) {
    throw std::invalid_argument("IncidenceMatrix::apply_transpose: size mismatch");
  }
  std::vector<double> x(cols, 0.0);
  for (int i = 0; i < rows; ++i) {
    for (int p = row_ptr[i]; p < row_ptr[i + 1]; ++p) x[col[p]] += val[p] * y[i];
  }
  return x;
}

linalg::SparseMatrix IncidenceMatrix::to_sparse() const {
  return linalg::SparseMatrix(rows, cols, row_ptr, col, std::vector<double>(val.begin(), val.end()));
}

IncidenceMatrix product(const IncidenceMatrix& a, const IncidenceMatrix& b) {
  if (a.cols != b.rows) throw std::invalid_argument("product: inner dimension mismatch");
  RowBuilder out(a.rows, b.cols);
  std::vector<long long> acc(b.cols, 0);
  std::vector<int> touched;
  std::vector<std::pair<int, int>> entries;
  for (int i = 0; i < a.rows; ++i) {
    touched.clear();
    for (int p = a.row_ptr[i]; p < a.row_ptr[i + 1]; ++p) {
      for (int q = b.row_ptr[a.col[p]]; q < b.row_ptr[a.col[p] + 1]; ++q) {
        if (acc[b.col[q]] == 0) touched.push_back(b.col[q]);
        acc[b.col[q]] += static_cast<long long>(a.val[p]) * b.val[q];
      }
    }
    std::sort(touched.begin(), touched.end());
    touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
    for (int j : touched) {
      if (acc[j] != 0) entries.emplace_back(j, static_cast<int>(acc[j]));
      acc[j] = 0;
    }
    out.close_row(entries);
  }
  return out.m;
}

int matrix_rank(const IncidenceMatrix& a) {
  Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(a.rows, a.cols);
  for (int i = 0; i < a.rows; ++i) {
    for (int p = a.row_ptr[i]; p < a.row_ptr[i + 1]; ++p) dense(i, a.col[p]) = a.val[p];
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(dense);
  lu.setThreshold(1e-9);
  return static_cast<int>(lu.rank());
}

DeRhamComplex build_complex(const TetMesh& mesh) {
  DeRhamComplex c;
  c.num_vertices = mesh.num_vertices();
  c.num_edges = mesh.num_edges();
  c.num_faces = mesh.num_faces();
  c.num_tets = mesh.num_tets();
  std::vector<std::pair<int, int>> entries;

  RowBuilder g(c.num_edges, c.num_vertices);
  for (const auto& e : mesh.edges) {
    entries = {{e[0], -1}, {e[1], 1}};
    g.close_row(entries);
  }
  c.G = std::move(g.m);

  RowBuilder cb(c.num_faces, c.num_edges);
  for (const auto& f : mesh.faces) {
    entries = {{find_edge(mesh, f[1], f[2]), 1}, {find_edge(mesh, f[0], f[2]), -1}, {find_edge(mesh, f[0], f[1]), 1}};
    cb.close_row(entries);
  }
  c.C = std::move(cb.m);

  RowBuilder d(c.num_tets, c.num_faces);
  for (int t = 0; t < c.num_tets; ++t) {
    const int sigma = mesh.tet_orientation[t];
    for (int m = 0; m < 4; ++m) {
      const int sign = (m % 2 == 0) ? 1 : -1;
      entries.emplace_back(mesh.tet_faces[t][m], sigma * sign * mesh.tet_face_signs[t][m]);
    }
    d.close_row(entries);
  }
  c.D = std::move(d.m);

  c.boundary_vertex = mesh.boundary_vertex;
  c.boundary_edge = mesh.boundary_edge;
  c.boundary_face = mesh.boundary_face;
  return c;
}

std::vector<double> discrete_div(const DeRhamComplex& complex, const TetMesh& mesh, std::span<const double> b) {
  if (b.size() != static_cast<std::size_t>(complex.num_faces)) {
    throw std::invalid_argument("discrete_div: coefficient vector has wrong length");
  }
  std::vector<double> div = complex.D.apply(b);
  for (int t = 0; t < complex.num_tets; ++t) div[t] /= mesh.tet_volumes[t];
  return div;
}

std::vector<double> interpolate_scalar(const TetMesh& mesh, int form_degree, const ScalarField& f) {
  if (form_degree == 0) {
    std::vector<double> out(mesh.num_vertices());
    for (int v = 0; v < mesh.num_vertices(); ++v) out[v] = f(mesh.vertices[v]);
    return out;
  }
  if (form_degree == 3) {
    const auto& rule = fem::tet_quadrature(4);
    std::vector<double> out(mesh.num_tets());
    for (int t = 0; t < mesh.num_tets(); ++t) {
      const auto& tv = mesh.tets[t];
      const Vec3& x0 = mesh.vertices[tv[0]];
      Mat3 J;
      J.col(0) = mesh.vertices[tv[1]] - x0;
      J.col(1) = mesh.vertices[tv[2]] - x0;
      J.col(2) = mesh.vertices[tv[3]] - x0;
      double s = 0.0;
      for (int q = 0; q < rule.size(); ++q) s += rule.weights[q] * f(x0 + J * rule.points[q]);
      // Weights sum to 1/6, so 6 * s is the average.
      out[t] = 6.0 * s;
    }
    return out;
  }
  throw std::invalid_argument("interpolate_scalar: form degree must be 0 or 3");
}

std::vector<double> interpolate_vector(const TetMesh& mesh, int form_degree, const VectorField& f) {
  if (form_degree == 1) {
    const fem::LineRule rule = fem::gauss_legendre(3);
    std::vector<double> out(mesh.num_edges());
    for (int e = 0; e < mesh.num_edges(); ++e) {
      const Vec3& a = mesh.vertices[mesh.edges[e][0]];
      const Vec3 t = mesh.vertices[mesh.edges[e][1]] - a;
      double s = 0.0;
      for (int q = 0; q < rule.size(); ++q) s += rule.weights[q] * f(a + rule.points[q] * t).dot(t);
      out[e] = s;
    }
    return out;
  }
  if (form_degree == 2) {
    const auto& rule = fem::triangle_quadrature(4);
    std::vector<double> out(mesh.num_faces());
    for (int k = 0; k < mesh.num_faces(); ++k) {
      const auto& fv = mesh.faces[k];
      const Vec3& a = mesh.vertices[fv[0]];
      const Vec3 ab = mesh.vertices[fv[1]] - a;
      const Vec3 ac = mesh.vertices[fv[2]] - a;
      const Vec3 n = ab.cross(ac);
      double s = 0.0;
      for (int q = 0; q < rule.size(); ++q) {
        s += rule.weights[q] * f(a + rule.points[q].x() * ab + rule.points[q].y() * ac).dot(n);
      }
      out[k] = s;
    }
    return out;
  }
  throw std::invalid_argument("interpolate_vector: form degree must be 1 or 2");
}

std::vector<double> flux_of_curl(const DeRhamComplex& complex, const TetMesh& mesh, const VectorField& potential) {
  return complex.C.apply(interpolate_vector(mesh, 1, potential));
}

std::vector<ComplexCheck> check_complex(const TetMesh& mesh) {
  const DeRhamComplex cx = build_complex(mesh);
  std::vector<ComplexCheck> out;
  out.push_back({"C*G = 0 (nonzeros)", false, static_cast<double>(product(cx.C, cx.G).nnz()), 0.0});
  out.push_back({"D*C = 0 (nonzeros)", false, static_cast<double>(product(cx.D, cx.C).nnz()), 0.0});
  const int rg = matrix_rank(cx.G);
  const int rc = matrix_rank(cx.C);
  const int rd = matrix_rank(cx.D);
  out.push_back({"rank G", false, double(rg), double(cx.num_vertices - 1)});
  out.push_back({"rank C", false, double(rc), double(cx.num_edges - rg)});
  out.push_back({"rank D", false, double(rd), double(cx.num_faces - rc)});
  out.push_back({"D onto cells", false, double(rd), double(cx.num_tets)});
  for (auto& c : out) c.passed = c.value == c.expected;

  const auto defect = [](std::span<const double> a, std::span<const double> b) {
    double d = 0.0;
    double s = 1.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      d = std::max(d, std::abs(a[i] - b[i]));
      s = std::max(s, std::abs(b[i]));
    }
    return d / s;
  };
  const ScalarField phi = [](const Vec3& x) { return x.x() * x.x() * x.y() + x.z() * x.z() * x.z(); };
  const VectorField grad_phi = [](const Vec3& x) {
    return Vec3(2 * x.x() * x.y(), x.x() * x.x(), 3 * x.z() * x.z());
  };
  const VectorField e = [](const Vec3& x) {
    return Vec3(x.x() * x.y() + x.z() * x.z(), x.y() * x.z() - x.x(), x.x() * x.x() + 0.5 * x.y());
  };
  const VectorField curl_e = [](const Vec3& x) { return Vec3(0.5 - x.y(), 2 * x.z() - 2 * x.x(), -1 - x.x()); };
  const VectorField b = [](const Vec3& x) {
    return Vec3(x.x() * x.x() + x.y() * x.z(), x.x() * x.y() - x.z(), x.y() * x.y() + x.x() * x.z() + 1);
  };
  const ScalarField div_b = [](const Vec3& x) { return 4 * x.x(); };

  const double dg = defect(cx.G.apply(interpolate_scalar(mesh, 0, phi)), interpolate_vector(mesh, 1, grad_phi));
  const double dc = defect(cx.C.apply(interpolate_vector(mesh, 1, e)), interpolate_vector(mesh, 2, curl_e));
  const double dd =
      defect(discrete_div(cx, mesh, interpolate_vector(mesh, 2, b)), interpolate_scalar(mesh, 3, div_b));
  out.push_back({"grad commutes with interpolation", dg <= 1e-12, dg, 0.0});
  out.push_back({"curl commutes with interpolation", dc <= 1e-12, dc, 0.0});
  out.push_back({"div commutes with interpolation", dd <= 1e-12, dd, 0.0});
  return out;
}

}  // namespace mhd
