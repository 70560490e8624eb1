#include "mhd/assembly/system_assembler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "mhd/assembly/fields.hpp"

namespace mhd {

namespace {

using linalg::SparseMatrix;
using linalg::Triplet;

constexpr int kNonlinearDegree = 6;

void add_scaled(std::vector<double>& y, double a, std::span<const double> x, int offset = 0) {
  for (std::size_t i = 0; i < x.size(); ++i) y[offset + i] += a * x[i];
}

}  // namespace

const char* scheme_name(Scheme scheme) {
  switch (scheme) {
    case Scheme::picard: return "picard";
    case Scheme::symmetric: return "symmetric";
    case Scheme::newton: return "newton";
  }
  return "unknown";
}

SystemAssembler::SystemAssembler(const Discretization& disc, const OperatorSet& ops) : disc_(disc), ops_(ops) {}

SparseMatrix SystemAssembler::convection(std::span<const double> w, ConvectionForm form) const {
  const int n = disc_.layout().n_u;
  if (w.size() != static_cast<std::size_t>(n)) throw std::invalid_argument("convection: velocity size mismatch");
  std::vector<Triplet> trip;
  trip.reserve(static_cast<std::size_t>(disc_.num_tets()) * 900);
  double local[30][30];
  for (int t = 0; t < disc_.num_tets(); ++t) {
    const ElementContext ctx = make_element_context(disc_, t, kNonlinearDegree);
    std::fill(&local[0][0], &local[0][0] + 900, 0.0);
    for (int q = 0; q < ctx.num_points(); ++q) {
      const double wq = ctx.weight[q];
      const Vec3 wv = velocity_at(ctx, w, q);
      const Mat3 gw = velocity_gradient_at(ctx, w, q);
      double phi[10];
      Vec3 dphi[10];
      double adv[10];  // w . grad phi
      for (int i = 0; i < 10; ++i) {
        phi[i] = ctx.p2.value(q, i);
        dphi[i] = ctx.p2.dvec(q, i);
        adv[i] = wv.dot(dphi[i]);
      }
      for (int i = 0; i < 10; ++i) {
        for (int j = 0; j < 10; ++j) {
          const double t1 = phi[i] * adv[j];   // (w.grad phi_j) phi_i
          const double t1t = phi[j] * adv[i];  // (w.grad phi_i) phi_j
          for (int c = 0; c < 3; ++c) {
            for (int d = 0; d < 3; ++d) {
              const double diag = (c == d) ? 1.0 : 0.0;
              const double t2 = phi[i] * phi[j] * gw(c, d);       // (u.grad w, v)
              const double t4 = phi[j] * dphi[i][d] * wv[c];      // (u.grad v, w)
              double val = 0.0;
              switch (form) {
                case ConvectionForm::skew: val = 0.5 * diag * (t1 - t1t); break;
                case ConvectionForm::newton: val = diag * t1 + t2; break;
                case ConvectionForm::newton_skew: val = 0.5 * (diag * (t1 - t1t) + t2 - t4); break;
                case ConvectionForm::advective: val = diag * t1; break;
              }
              local[3 * i + c][3 * j + d] += wq * val;
            }
          }
        }
      }
    }
    for (int a = 0; a < 30; ++a) {
      for (int b = 0; b < 30; ++b) {
        if (local[a][b] == 0.0) continue;
        trip.push_back({3 * ctx.p2_nodes[a / 3] + a % 3, 3 * ctx.p2_nodes[b / 3] + b % 3, local[a][b]});
      }
    }
  }
  return SparseMatrix::from_triplets(n, n, trip);
}

LorentzBlocks SystemAssembler::lorentz(std::span<const double> beta) const {
  const DofLayout& l = disc_.layout();
  if (beta.size() != static_cast<std::size_t>(l.n_B)) throw std::invalid_argument("lorentz: field size mismatch");
  std::vector<Triplet> tuu, tEu;
  double kuu[30][30];
  double kEu[6][30];
  for (int t = 0; t < disc_.num_tets(); ++t) {
    const ElementContext ctx = make_element_context(disc_, t, kNonlinearDegree);
    std::fill(&kuu[0][0], &kuu[0][0] + 900, 0.0);
    std::fill(&kEu[0][0], &kEu[0][0] + 180, 0.0);
    bool nonzero = false;
    for (int q = 0; q < ctx.num_points(); ++q) {
      const Vec3 b = face_field_at(ctx, beta, q);
      if (b.squaredNorm() == 0.0) continue;
      nonzero = true;
      const double wq = ctx.weight[q];
      const Mat3 K = b.squaredNorm() * Mat3::Identity() - b * b.transpose();
      std::array<Vec3, 3> exb;  // e_d x beta
      for (int d = 0; d < 3; ++d) exb[d] = Vec3::Unit(d).cross(b);
      for (int i = 0; i < 10; ++i) {
        const double pi = ctx.p2.value(q, i);
        for (int j = 0; j < 10; ++j) {
          const double pij = wq * pi * ctx.p2.value(q, j);
          for (int c = 0; c < 3; ++c) {
            for (int d = 0; d < 3; ++d) kuu[3 * i + c][3 * j + d] += pij * K(c, d);
          }
        }
      }
      for (int e = 0; e < 6; ++e) {
        const Vec3 psi = ctx.nd.vec(q, e);
        for (int j = 0; j < 10; ++j) {
          const double pj = wq * ctx.p2.value(q, j);
          for (int d = 0; d < 3; ++d) kEu[e][3 * j + d] += pj * exb[d].dot(psi);
        }
      }
    }
    if (!nonzero) continue;
    for (int a = 0; a < 30; ++a) {
      const int ga = 3 * ctx.p2_nodes[a / 3] + a % 3;
      for (int b = 0; b < 30; ++b) tuu.push_back({ga, 3 * ctx.p2_nodes[b / 3] + b % 3, kuu[a][b]});
    }
    for (int e = 0; e < 6; ++e) {
      for (int b = 0; b < 30; ++b) tEu.push_back({ctx.edges[e], 3 * ctx.p2_nodes[b / 3] + b % 3, kEu[e][b]});
    }
  }
  return {SparseMatrix::from_triplets(l.n_u, l.n_u, tuu), SparseMatrix::from_triplets(l.n_E, l.n_u, tEu)};
}

NewtonMagneticBlocks SystemAssembler::newton_magnetic(std::span<const double> u_minus, std::span<const double> E_minus,
                                                      std::span<const double> B_minus) const {
  const DofLayout& l = disc_.layout();
  if (u_minus.size() != static_cast<std::size_t>(l.n_u) || E_minus.size() != static_cast<std::size_t>(l.n_E) ||
      B_minus.size() != static_cast<std::size_t>(l.n_B)) {
    throw std::invalid_argument("newton_magnetic: state size mismatch");
  }
  NewtonMagneticBlocks out;
  out.rhs_u.assign(l.n_u, 0.0);
  out.rhs_E.assign(l.n_E, 0.0);
  std::vector<Triplet> tuB, tEB;
  for (int t = 0; t < disc_.num_tets(); ++t) {
    const ElementContext ctx = make_element_context(disc_, t, kNonlinearDegree);
    double kuB[30][4] = {};
    double kEB[6][4] = {};
    double fu[30] = {};
    double fE[6] = {};
    for (int q = 0; q < ctx.num_points(); ++q) {
      const double wq = ctx.weight[q];
      const Vec3 um = velocity_at(ctx, u_minus, q);
      const Vec3 Em = edge_field_at(ctx, E_minus, q);
      const Vec3 Bm = face_field_at(ctx, B_minus, q);
      const Vec3 uxB = um.cross(Bm);
      const Vec3 force = -(Em.cross(Bm) + 2.0 * uxB.cross(Bm));
      for (int m = 0; m < 4; ++m) {
        const Vec3 rho = ctx.rt.vec(q, m);
        const Vec3 g = -(Em.cross(rho) + uxB.cross(rho) + um.cross(rho).cross(Bm));
        const Vec3 uxr = um.cross(rho);
        for (int i = 0; i < 10; ++i) {
          const double pi = wq * ctx.p2.value(q, i);
          for (int c = 0; c < 3; ++c) kuB[3 * i + c][m] += pi * g[c];
        }
        for (int e = 0; e < 6; ++e) kEB[e][m] += wq * uxr.dot(ctx.nd.vec(q, e));
      }
      for (int i = 0; i < 10; ++i) {
        const double pi = wq * ctx.p2.value(q, i);
        for (int c = 0; c < 3; ++c) fu[3 * i + c] += pi * force[c];
      }
      for (int e = 0; e < 6; ++e) fE[e] += wq * uxB.dot(ctx.nd.vec(q, e));
    }
    for (int a = 0; a < 30; ++a) {
      const int ga = 3 * ctx.p2_nodes[a / 3] + a % 3;
      for (int m = 0; m < 4; ++m) tuB.push_back({ga, ctx.faces[m], kuB[a][m]});
      out.rhs_u[ga] += fu[a];
    }
    for (int e = 0; e < 6; ++e) {
      for (int m = 0; m < 4; ++m) tEB.push_back({ctx.edges[e], ctx.faces[m], kEB[e][m]});
      out.rhs_E[ctx.edges[e]] += fE[e];
    }
  }
  out.uB = SparseMatrix::from_triplets(l.n_u, l.n_B, tuB);
  out.EB = SparseMatrix::from_triplets(l.n_E, l.n_B, tEB);
  return out;
}

double SystemAssembler::step_size_threshold(std::span<const double> B_minus, const Params& params) const {
  const double bmax = face_field_max_norm(disc_, B_minus);
  if (bmax == 0.0) return std::numeric_limits<double>::infinity();
  return 1.0 / (8.0 * params.S * bmax * bmax);
}

BlockSystem SystemAssembler::assemble(Scheme scheme, const State& iterate, const State& old, const Params& params,
                                      const SourceData& sources, const AssemblyOptions& options,
                                      std::vector<Warning>* warnings) const {
  params.validate();
  const DofLayout& L = disc_.layout();
  check_state(L, iterate);
  check_state(L, old);
  sources.check(L);

  const double k = params.k;
  const double S = params.S;
  const double sRm = S / params.Rm;

  if (warnings != nullptr) {
    const std::vector<double> div = disc_.complex().D.apply(iterate.B);
    double dmax = 0.0;
    for (double d : div) dmax = std::max(dmax, std::abs(d));
    double bmax = 0.0;
    for (double b : iterate.B) bmax = std::max(bmax, std::abs(b));
    // |(D b)_T| is at most 4 |b|_inf; compare relative to that.
    if (bmax > 0.0 && dmax > 1e-10 * 4.0 * bmax) {
      std::ostringstream os;
      os << "frozen magnetic field is not discretely divergence free (max |D b| = " << dmax << ")";
      warnings->push_back({Warning::Kind::divergence_violation, os.str(), dmax, 1e-10 * 4.0 * bmax});
    }
    const double threshold = step_size_threshold(iterate.B, params);
    if (k > threshold) {
      std::ostringstream os;
      os << "time step k = " << k << " exceeds 1/(8 S |B-|_inf^2) = " << threshold;
      warnings->push_back({Warning::Kind::step_size_bound, os.str(), k, threshold});
    }
    if (scheme == Scheme::newton) {
      const double h = disc_.mesh().mesh_size();
      if (k > h * h * h) {
        std::ostringstream os;
        os << "Newton step: k = " << k << " is not small relative to h^3 = " << h * h * h;
        warnings->push_back({Warning::Kind::h3_condition, os.str(), k, h * h * h});
      }
    }
  }

  std::vector<Triplet> trip;
  const int oU = L.off_u, oE = L.off_E, oB = L.off_B, oP = L.off_p, oL = L.off_lambda;

  // Momentum row.
  ops_.mass_u.append_triplets(trip, oU, oU, 1.0 / k);
  ops_.stiffness_u.append_triplets(trip, oU, oU, 1.0 / params.Re);
  SparseMatrix conv;
  if (scheme == Scheme::picard) {
    conv = convection(iterate.u, ConvectionForm::skew);
    conv.append_triplets(trip, oU, oU);
  } else if (scheme == Scheme::newton) {
    conv = convection(iterate.u, options.newton_convection);
    conv.append_triplets(trip, oU, oU);
  } else {
    conv = convection(iterate.u, ConvectionForm::skew);
  }
  const LorentzBlocks lor = lorentz(iterate.B);
  lor.uu.append_triplets(trip, oU, oU, S);
  lor.Eu.transpose().append_triplets(trip, oU, oE, S);
  ops_.div_up.transpose().append_triplets(trip, oU, oP, -1.0);

  // Ohm row.
  lor.Eu.append_triplets(trip, oE, oU, S);
  ops_.mass_E.append_triplets(trip, oE, oE, S);
  ops_.curl_coupling.transpose().append_triplets(trip, oE, oB, -sRm);

  // Faraday row (negated for the symmetric scheme).
  const double fsign = (scheme == Scheme::symmetric) ? -1.0 : 1.0;
  ops_.curl_coupling.append_triplets(trip, oB, oE, fsign * sRm);
  ops_.mass_B.append_triplets(trip, oB, oB, fsign * sRm / k);
  if (params.grad_div) ops_.divdiv_B.append_triplets(trip, oB, oB, fsign * sRm);

  // Continuity and mean-pressure rows.
  ops_.div_up.append_triplets(trip, oP, oU, -1.0);
  for (int i = 0; i < L.n_p; ++i) {
    trip.push_back({oP + i, oL, ops_.p_integrals[i]});
    trip.push_back({oL, oP + i, ops_.p_integrals[i]});
  }

  NewtonMagneticBlocks nb;
  if (scheme == Scheme::newton) {
    nb = newton_magnetic(iterate.u, iterate.E, iterate.B);
    nb.uB.append_triplets(trip, oU, oB, S);
    nb.EB.append_triplets(trip, oE, oB, S);
  }

  BlockSystem sys;
  sys.layout = L;
  sys.matrix = SparseMatrix::from_triplets(L.total, L.total, trip);
  sys.symmetric = (scheme == Scheme::symmetric);
  sys.rhs.assign(L.total, 0.0);

  std::vector<double>& rhs = sys.rhs;
  add_scaled(rhs, 1.0 / k, ops_.mass_u.multiply(old.u), oU);
  if (!sources.f.empty()) add_scaled(rhs, 1.0, sources.f, oU);
  if (!sources.r.empty()) add_scaled(rhs, 1.0, sources.r, oE);
  add_scaled(rhs, fsign * sRm / k, ops_.mass_B.multiply(old.B), oB);
  if (!sources.l.empty()) add_scaled(rhs, fsign, sources.l, oB);
  if (!sources.g.empty()) add_scaled(rhs, -1.0, sources.g, oP);

  if (scheme == Scheme::symmetric) {
    add_scaled(rhs, -1.0, conv.multiply(iterate.u), oU);
  } else if (scheme == Scheme::newton) {
    // Data terms of the linearization: conv(w) w - conv'(w) w.
    if (options.newton_convection == ConvectionForm::newton) {
      add_scaled(rhs, 1.0, convection(iterate.u, ConvectionForm::advective).multiply(iterate.u), oU);
    } else if (options.newton_convection == ConvectionForm::newton_skew) {
      add_scaled(rhs, 1.0, convection(iterate.u, ConvectionForm::skew).multiply(iterate.u), oU);
    } else {
      throw std::invalid_argument("assemble: Newton convection must be `newton` or `newton_skew`");
    }
    add_scaled(rhs, S, nb.rhs_u, oU);
    add_scaled(rhs, S, nb.rhs_E, oE);
  }

  if (options.apply_bcs) apply_essential_bcs(sys, disc_.system_mask());
  return sys;
}

}  // namespace mhd
