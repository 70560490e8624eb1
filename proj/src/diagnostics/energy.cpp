#include "mhd/diagnostics/energy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mhd/assembly/fields.hpp"
#include "mhd/linalg/kernels.hpp"

namespace mhd {

namespace {

double quad(const linalg::SparseMatrix& a, std::span<const double> x, std::span<const double> y) {
  const std::vector<double> ax = a.multiply(x);
  return simd::dot(ax, y);
}

double dot_or_zero(const std::vector<double>& a, std::span<const double> b) {
  return a.empty() ? 0.0 : simd::dot(a, b);
}

}  // namespace

double current_norm_squared(const Discretization& disc, std::span<const double> u, std::span<const double> E,
                            std::span<const double> beta) {
  double s = 0.0;
  for (int t = 0; t < disc.num_tets(); ++t) {
    const ElementContext ctx = make_element_context(disc, t, 6);
    for (int q = 0; q < ctx.num_points(); ++q) {
      const Vec3 j = edge_field_at(ctx, E, q) + velocity_at(ctx, u, q).cross(face_field_at(ctx, beta, q));
      s += ctx.weight[q] * j.squaredNorm();
    }
  }
  return s;
}

EnergyLedger::EnergyLedger(const Discretization& disc, const OperatorSet& ops, const Params& params)
    : disc_(disc), ops_(ops), params_(params), norms_(ops, params.k), dual_(disc, ops) {}

EnergyRecord EnergyLedger::base_record(const State& s) const {
  EnergyRecord r;
  r.step = s.step;
  r.t = s.t;
  r.kinetic = 0.5 * quad(ops_.mass_u, s.u, s.u);
  r.magnetic = 0.5 * params_.S / params_.Rm * quad(ops_.mass_B, s.B, s.B);
  r.dissipation = quad(ops_.stiffness_u, s.u, s.u) / params_.Re;
  const DivBStats div = divb_monitor(disc_, s.B);
  r.divb_max = div.max_abs;
  r.divb_l2 = div.l2;
  r.norms = norms_.compute(s);
  return r;
}

const EnergyRecord& EnergyLedger::start(const State& s) {
  records_.clear();
  EnergyRecord r = base_record(s);
  e0_ = 2.0 * (r.kinetic + r.magnetic);
  dissipation_sum_ = 0.0;
  forcing_sum_ = 0.0;
  max_left_ = e0_;
  r.bound_margin = 0.0;
  records_.push_back(r);
  return records_.back();
}

const EnergyRecord& EnergyLedger::add_step(const State& old, const State& next, std::span<const double> beta,
                                           const SourceData& sources, double explicit_convection) {
  const double k = params_.k;
  const double sRm = params_.S / params_.Rm;
  EnergyRecord r = base_record(next);
  const double j2 = current_norm_squared(disc_, next.u, next.E, beta);
  r.joule = params_.S * j2;

  std::vector<double> du(next.u.size()), db(next.B.size());
  for (std::size_t i = 0; i < du.size(); ++i) du[i] = next.u[i] - old.u[i];
  for (std::size_t i = 0; i < db.size(); ++i) db[i] = next.B[i] - old.B[i];
  const double kin_rate = quad(ops_.mass_u, du, next.u) / k;
  const double mag_rate = sRm * quad(ops_.mass_B, db, next.B) / k;
  const double graddiv = params_.grad_div ? sRm * quad(ops_.divdiv_B, next.B, next.B) : 0.0;
  const double fu = dot_or_zero(sources.f, next.u);
  const double re = dot_or_zero(sources.r, next.E);
  const double lb = dot_or_zero(sources.l, next.B);
  const double gp = dot_or_zero(sources.g, next.p);
  const double terms[] = {kin_rate, mag_rate, r.dissipation, r.joule, graddiv, explicit_convection, gp, fu, re, lb};
  r.identity_residual =
      kin_rate + mag_rate + r.dissipation + r.joule + graddiv + explicit_convection - gp - fu - re - lb;
  r.identity_scale = 0.0;
  for (double v : terms) r.identity_scale += std::abs(v);

  const double e_new = 2.0 * (r.kinetic + r.magnetic);
  const double e_old = quad(ops_.mass_u, old.u, old.u) + sRm * quad(ops_.mass_B, old.B, old.B);
  r.step_margin = e_old + 2.0 * k * fu - (e_new + 2.0 * k * r.dissipation + 2.0 * k * r.joule);

  const double fdual = dual_(sources.f);
  dissipation_sum_ += k * r.dissipation + 2.0 * k * r.joule;
  forcing_sum_ += k * params_.Re * fdual * fdual;
  max_left_ = std::max(max_left_, e_new + dissipation_sum_);
  r.bound_margin = e0_ + forcing_sum_ - max_left_;
  records_.push_back(r);
  return records_.back();
}

double EnergyLedger::max_divb() const {
  double m = 0.0;
  for (const auto& r : records_) m = std::max(m, r.divb_max);
  return m;
}

double EnergyLedger::min_step_margin_relative() const {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < records_.size(); ++i) {
    const double scale = std::max(1e-300, 2.0 * (records_[i - 1].kinetic + records_[i - 1].magnetic) +
                                              2.0 * (records_[i].kinetic + records_[i].magnetic));
    m = std::min(m, records_[i].step_margin / scale);
  }
  return m;
}

double EnergyLedger::max_identity_residual_relative() const {
  double m = 0.0;
  for (std::size_t i = 1; i < records_.size(); ++i) {
    if (records_[i].identity_scale > 0) {
      m = std::max(m, std::abs(records_[i].identity_residual) / records_[i].identity_scale);
    }
  }
  return m;
}

double EnergyLedger::min_bound_margin_relative() const {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < records_.size(); ++i) {
    m = std::min(m, records_[i].bound_margin / std::max(1e-300, e0_ + forcing_sum_));
  }
  return m;
}

bool EnergyLedger::energy_non_increasing(double rel_tol) const {
  for (std::size_t i = 1; i < records_.size(); ++i) {
    const double prev = records_[i - 1].kinetic + records_[i - 1].magnetic;
    const double cur = records_[i].kinetic + records_[i].magnetic;
    if (cur > prev * (1.0 + rel_tol)) return false;
  }
  return true;
}

}  // namespace mhd
