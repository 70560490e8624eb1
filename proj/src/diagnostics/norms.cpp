#include "mhd/diagnostics/norms.hpp"

#include <cmath>

#include "mhd/linalg/kernels.hpp"

namespace mhd {

namespace {

double quad(const linalg::SparseMatrix& a, std::span<const double> x) {
  const std::vector<double> ax = a.multiply(x);
  return simd::dot(ax, x);
}

std::vector<double> diff(std::span<const double> a, std::span<const double> b) {
  std::vector<double> d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  return d;
}

}  // namespace

WeightedNorms::WeightedNorms(const OperatorSet& ops, double k) : ops_(ops), k_(k), mass_p_(ops.mass_p) {
  if (!(k > 0)) throw std::invalid_argument("WeightedNorms: k must be positive");
}

double WeightedNorms::u_squared(std::span<const double> u) const {
  const std::vector<double> d = ops_.div_up.multiply(u);
  const std::vector<double> pd = mass_p_.solve(d);
  return quad(ops_.mass_u, u) / k_ + quad(ops_.stiffness_u, u) + simd::dot(d, pd) / k_;
}

double WeightedNorms::E_squared(std::span<const double> e) const {
  const std::vector<double> ce = ops_.curl.multiply(e);
  return quad(ops_.mass_E, e) + k_ * quad(ops_.mass_B, ce);
}

double WeightedNorms::B_squared(std::span<const double> b) const {
  return quad(ops_.mass_B, b) / k_ + quad(ops_.divdiv_B, b);
}

double WeightedNorms::p_squared(std::span<const double> p) const { return k_ * quad(ops_.mass_p, p); }

NormRecord WeightedNorms::compute(const State& s) const {
  NormRecord r;
  const double u2 = u_squared(s.u);
  const double e2 = E_squared(s.E);
  const double b2 = B_squared(s.B);
  r.u = std::sqrt(std::max(u2, 0.0));
  r.E = std::sqrt(std::max(e2, 0.0));
  r.B = std::sqrt(std::max(b2, 0.0));
  r.p = std::sqrt(std::max(p_squared(s.p), 0.0));
  r.X = std::sqrt(std::max(u2 + e2 + b2, 0.0));
  return r;
}

double WeightedNorms::x_norm(const State& s) const {
  return std::sqrt(std::max(u_squared(s.u) + E_squared(s.E) + B_squared(s.B), 0.0));
}

double WeightedNorms::x_distance(const State& a, const State& b) const {
  const double s = u_squared(diff(a.u, b.u)) + E_squared(diff(a.E, b.E)) + B_squared(diff(a.B, b.B));
  return std::sqrt(std::max(s, 0.0));
}

DivBStats divb_monitor(const Discretization& disc, std::span<const double> b) {
  const std::vector<double> div = discrete_div(disc.complex(), disc.mesh(), b);
  DivBStats s;
  double l2 = 0.0;
  for (int t = 0; t < disc.num_tets(); ++t) {
    s.max_abs = std::max(s.max_abs, std::abs(div[t]));
    l2 += disc.mesh().tet_volumes[t] * div[t] * div[t];
  }
  s.l2 = std::sqrt(l2);
  return s;
}

DualNorm::DualNorm(const Discretization& disc, const OperatorSet& ops)
    : disc_(disc), stiffness_(linalg::eliminate_dofs(ops.stiffness_u, disc.velocity_mask(), 1.0)) {}

double DualNorm::operator()(std::span<const double> f) const {
  if (f.empty()) return 0.0;
  std::vector<double> g(f.begin(), f.end());
  const auto& mask = disc_.velocity_mask();
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (mask[i]) g[i] = 0.0;
  }
  const std::vector<double> x = stiffness_.solve(g);
  return std::sqrt(std::max(simd::dot(g, x), 0.0));
}

}  // namespace mhd
