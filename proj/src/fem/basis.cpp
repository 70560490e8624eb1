#include "mhd/fem/basis.hpp"

#include <stdexcept>

namespace mhd::fem {

namespace {

// Reference barycentric gradients.
const std::array<Vec3, 4>& ref_grad_lambda() {
  static const std::array<Vec3, 4> g{Vec3(-1, -1, -1), Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(0, 0, 1)};
  return g;
}

void set(std::vector<double>& buf, int offset, const Vec3& v) {
  buf[offset] = v.x();
  buf[offset + 1] = v.y();
  buf[offset + 2] = v.z();
}

}  // namespace

const char* element_name(ElementKind kind) {
  switch (kind) {
    case ElementKind::P1: return "P1";
    case ElementKind::P2: return "P2";
    case ElementKind::P2vec: return "P2vec";
    case ElementKind::ND0: return "ND0";
    case ElementKind::RT0: return "RT0";
    case ElementKind::DG0: return "DG0";
  }
  throw std::invalid_argument("element_name: unknown element kind");
}

int num_basis(ElementKind kind) {
  switch (kind) {
    case ElementKind::P1: return 4;
    case ElementKind::P2: return 10;
    case ElementKind::P2vec: return 30;
    case ElementKind::ND0: return 6;
    case ElementKind::RT0: return 4;
    case ElementKind::DG0: return 1;
  }
  throw std::invalid_argument("num_basis: unknown element kind");
}

int value_dim(ElementKind kind) {
  switch (kind) {
    case ElementKind::P1:
    case ElementKind::P2:
    case ElementKind::DG0: return 1;
    case ElementKind::P2vec:
    case ElementKind::ND0:
    case ElementKind::RT0: return 3;
  }
  throw std::invalid_argument("value_dim: unknown element kind");
}

int deriv_dim(ElementKind kind) {
  switch (kind) {
    case ElementKind::P1:
    case ElementKind::P2:
    case ElementKind::ND0: return 3;
    case ElementKind::P2vec: return 9;
    case ElementKind::RT0: return 1;
    case ElementKind::DG0: return 0;
  }
  throw std::invalid_argument("deriv_dim: unknown element kind");
}

BasisTable eval_basis(ElementKind kind, std::span<const Vec3> ref_points) {
  BasisTable t;
  t.kind = kind;
  t.num_points = static_cast<int>(ref_points.size());
  t.num_basis = num_basis(kind);
  t.value_dim = value_dim(kind);
  t.deriv_dim = deriv_dim(kind);
  t.values.assign(static_cast<std::size_t>(t.num_points) * t.num_basis * t.value_dim, 0.0);
  t.derivs.assign(static_cast<std::size_t>(t.num_points) * t.num_basis * t.deriv_dim, 0.0);
  const auto& gl = ref_grad_lambda();

  for (int q = 0; q < t.num_points; ++q) {
    const Vec3& p = ref_points[q];
    const std::array<double, 4> l{1.0 - p.x() - p.y() - p.z(), p.x(), p.y(), p.z()};
    const int vbase = q * t.num_basis * t.value_dim;
    const int dbase = q * t.num_basis * t.deriv_dim;
    switch (kind) {
      case ElementKind::P1:
        for (int i = 0; i < 4; ++i) {
          t.values[vbase + i] = l[i];
          set(t.derivs, dbase + 3 * i, gl[i]);
        }
        break;
      case ElementKind::P2:
      case ElementKind::P2vec: {
        std::array<double, 10> phi{};
        std::array<Vec3, 10> grad;
        for (int i = 0; i < 4; ++i) {
          phi[i] = l[i] * (2.0 * l[i] - 1.0);
          grad[i] = (4.0 * l[i] - 1.0) * gl[i];
        }
        for (int e = 0; e < 6; ++e) {
          const int a = kLocalEdges[e][0];
          const int b = kLocalEdges[e][1];
          phi[4 + e] = 4.0 * l[a] * l[b];
          grad[4 + e] = 4.0 * (l[a] * gl[b] + l[b] * gl[a]);
        }
        if (kind == ElementKind::P2) {
          for (int i = 0; i < 10; ++i) {
            t.values[vbase + i] = phi[i];
            set(t.derivs, dbase + 3 * i, grad[i]);
          }
        } else {
          for (int i = 0; i < 10; ++i) {
            for (int c = 0; c < 3; ++c) {
              const int k = 3 * i + c;
              t.values[vbase + 3 * k + c] = phi[i];
              set(t.derivs, dbase + 9 * k + 3 * c, grad[i]);
            }
          }
        }
        break;
      }
      case ElementKind::ND0:
        for (int e = 0; e < 6; ++e) {
          const int a = kLocalEdges[e][0];
          const int b = kLocalEdges[e][1];
          set(t.values, vbase + 3 * e, l[a] * gl[b] - l[b] * gl[a]);
          set(t.derivs, dbase + 3 * e, 2.0 * gl[a].cross(gl[b]));
        }
        break;
      case ElementKind::RT0:
        for (int m = 0; m < 4; ++m) {
          const int a = kLocalFaces[m][0];
          const int b = kLocalFaces[m][1];
          const int c = kLocalFaces[m][2];
          const Vec3 v = 2.0 * (l[a] * gl[b].cross(gl[c]) + l[b] * gl[c].cross(gl[a]) +
                                l[c] * gl[a].cross(gl[b]));
          set(t.values, vbase + 3 * m, v);
          t.derivs[dbase + m] = 6.0 * gl[a].dot(gl[b].cross(gl[c]));
        }
        break;
      case ElementKind::DG0:
        t.values[vbase] = 1.0;
        break;
    }
  }
  return t;
}

BasisTable push_forward(const BasisTable& ref, const TetGeometry& geom) {
  BasisTable t = ref;
  const Mat3 JinvT = geom.Jinv.transpose();
  const double inv_det = 1.0 / geom.det;
  const int n = ref.num_points * ref.num_basis;
  switch (ref.kind) {
    case ElementKind::P1:
    case ElementKind::P2:
      for (int k = 0; k < n; ++k) {
        const Vec3 g(&ref.derivs[3 * k]);
        set(t.derivs, 3 * k, JinvT * g);
      }
      break;
    case ElementKind::P2vec:
      for (int k = 0; k < n; ++k) {
        for (int c = 0; c < 3; ++c) {
          const Vec3 g(&ref.derivs[9 * k + 3 * c]);
          set(t.derivs, 9 * k + 3 * c, JinvT * g);
        }
      }
      break;
    case ElementKind::ND0:
      for (int k = 0; k < n; ++k) {
        set(t.values, 3 * k, JinvT * Vec3(&ref.values[3 * k]));
        set(t.derivs, 3 * k, inv_det * (geom.J * Vec3(&ref.derivs[3 * k])));
      }
      break;
    case ElementKind::RT0:
      for (int k = 0; k < n; ++k) {
        set(t.values, 3 * k, inv_det * (geom.J * Vec3(&ref.values[3 * k])));
        t.derivs[k] = inv_det * ref.derivs[k];
      }
      break;
    case ElementKind::DG0:
      break;
  }
  return t;
}

}  // namespace mhd::fem
