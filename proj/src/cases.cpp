#include "mhd/cases.hpp"

#include <cmath>
#include <numbers>

namespace mhd::cases {

namespace {

struct Trig {
  double kx, ky, kz;
  explicit Trig(const Box& b) : kx(std::numbers::pi / b.lx), ky(std::numbers::pi / b.ly), kz(std::numbers::pi / b.lz) {}
};

}  // namespace

VectorField trig_potential(const Box& box, double amp) {
  const Trig w(box);
  return [w, amp](const Vec3& x) {
    const double sx = std::sin(w.kx * x.x()), sy = std::sin(w.ky * x.y()), sz = std::sin(w.kz * x.z());
    return Vec3(amp * sy * sz, amp * sx * sz, amp * sx * sy);
  };
}

VectorField trig_potential_curl(const Box& box, double amp) {
  const Trig w(box);
  return [w, amp](const Vec3& x) {
    const double sx = std::sin(w.kx * x.x()), sy = std::sin(w.ky * x.y()), sz = std::sin(w.kz * x.z());
    const double cx = w.kx * std::cos(w.kx * x.x()), cy = w.ky * std::cos(w.ky * x.y()),
                 cz = w.kz * std::cos(w.kz * x.z());
    // A = (sy sz, sx sz, sx sy)
    return Vec3(amp * (sx * cy - sx * cz), amp * (sy * cz - cx * sy), amp * (cx * sz - cy * sz));
  };
}

VectorField trig_velocity(const Box& box, double amp) {
  const Trig w(box);
  return [w, amp](const Vec3& x) {
    const double sx = std::sin(w.kx * x.x()), sy = std::sin(w.ky * x.y()), sz = std::sin(w.kz * x.z());
    const double cx = w.kx * std::cos(w.kx * x.x()), cy = w.ky * std::cos(w.ky * x.y());
    // psi = sx^2 sy^2 sz^2, u = (d_y psi, -d_x psi, 0)
    const double dpsi_dy = 2.0 * sx * sx * sy * cy * sz * sz;
    const double dpsi_dx = 2.0 * sx * cx * sy * sy * sz * sz;
    return Vec3(amp * dpsi_dy, -amp * dpsi_dx, 0.0);
  };
}

VectorField trig_forcing(const Box& box, double amp) {
  const Trig w(box);
  return [w, amp](const Vec3& x) {
    const double s = std::sin(w.kx * x.x()) * std::sin(w.ky * x.y()) * std::sin(w.kz * x.z());
    return Vec3::Constant(amp * s).eval();
  };
}

std::vector<double> velocity_load(const Discretization& disc, const VectorField& f) {
  std::vector<double> out(disc.layout().n_u, 0.0);
  for (int t = 0; t < disc.num_tets(); ++t) {
    const ElementContext ctx = make_element_context(disc, t, 6);
    for (int q = 0; q < ctx.num_points(); ++q) {
      const Vec3 fq = ctx.weight[q] * f(ctx.points[q]);
      for (int i = 0; i < 10; ++i) {
        const double phi = ctx.p2.value(q, i);
        for (int c = 0; c < 3; ++c) out[3 * ctx.p2_nodes[i] + c] += phi * fq[c];
      }
    }
  }
  return out;
}

}  // namespace mhd::cases
