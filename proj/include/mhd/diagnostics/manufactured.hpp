#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "mhd/assembly/block_system.hpp"
#include "mhd/solver/mhd_solver.hpp"

namespace mhd {

using TensorField = std::function<Mat3(const Vec3&)>;

/// Exact solution of one linearized Picard step, linearized at frozen data
/// (w, beta_h). w must be P2 representable; beta_h = C Pi^curl(A_beta) with
/// boundary circulations zeroed, so it is divergence free with zero normal
/// flux. The sources that make the solution exact are, with j = E + u x beta_h,
///   f = (u - w)/k + (w.grad) u + (div w) u / 2 - lap u / Re + S beta_h x j + grad p
///   r = S j - S/Rm curl B
///   l = S/Rm [curl E + (B - beta_h)/k - grad div B]
/// where the first two terms of l enter as M_B (C Pi^curl E + (Pi^div B - beta_h)/k)
/// so that divergence-free data stay discretely compliant.
///   g = div u
/// beta_h enters only pointwise, so the sources are evaluated element by
/// element at the quadrature points.
struct ManufacturedCase {
  std::string name;
  VectorField u;
  TensorField grad_u;  // row c = grad u_c
  VectorField lap_u;
  VectorField E;
  VectorField curl_E;
  VectorField B;
  /// Optional A with B = curl A; Pi^div B is then C Pi^curl A, exactly
  /// divergence free even where face quadrature is not exact.
  VectorField B_potential;
  VectorField curl_B;
  VectorField grad_div_B;
  ScalarField p;
  VectorField grad_p;
  VectorField w;
  ScalarField div_w;
  VectorField beta_potential;
};

/// Named cases: "trig" (all fields smooth and nonzero), "stokes" (velocity
/// and pressure only, no magnetic coupling), "patch" (hydrostatic pressure,
/// exactly representable, with nonzero frozen data).
ManufacturedCase manufactured_case(const std::string& name, const Box& box);

/// Old state (w, beta_h): w nodally interpolated (boundary values kept).
State manufactured_old_state(const Discretization& disc, const ManufacturedCase& mc);

/// Sources tested against the basis functions (degree-6 quadrature).
SourceData manufactured_sources(const Discretization& disc, const Params& params, const ManufacturedCase& mc,
                                const State& old);

struct ManufacturedErrors {
  int n = 0;
  double h = 0.0;
  double k = 0.0;
  double u_l2 = 0.0;
  double u_h1 = 0.0;  // H1 seminorm
  double E_l2 = 0.0;
  double B_l2 = 0.0;
  double p_l2 = 0.0;
  double divb_max = 0.0;
};

/// L2 / H1-seminorm errors of a discrete state against the exact fields.
ManufacturedErrors manufactured_errors(const Discretization& disc, const State& s, const ManufacturedCase& mc);

/// Warns `noncompliant_source` when the step old -> next changed the discrete
/// divergence, i.e. |D (b - b_old)|_inf > 1e-10 * 4 * max(|b|_inf, |b_old|_inf).
/// Compliant Faraday data keep D b = D b_old exactly.
bool check_source_compliance(const Discretization& disc, std::span<const double> b_old,
                             std::span<const double> b, std::vector<Warning>* warnings);

/// One Picard solve of the case on the given discretization.
ManufacturedErrors manufactured_solve(const Discretization& disc, const Params& params, const ManufacturedCase& mc,
                                      std::vector<Warning>* warnings = nullptr);

struct ObservedOrders {
  double u_l2 = 0.0;
  double u_h1 = 0.0;
  double E_l2 = 0.0;
  double B_l2 = 0.0;
  double p_l2 = 0.0;
};

struct ConvergenceTable {
  std::string case_name;
  std::vector<ManufacturedErrors> rows;
  /// orders[i] compares rows[i] and rows[i + 1]: log(e_i / e_{i+1}) / log(h_i / h_{i+1}).
  std::vector<ObservedOrders> orders;
  std::vector<Warning> warnings;
};

/// Runs the case on structured meshes of the given sizes. `k_schedule` gives
/// the step per mesh (empty: params.k everywhere). Fewer than two meshes, or a
/// schedule of the wrong length, throws std::invalid_argument.
ConvergenceTable manufactured_convergence(const std::string& case_name, std::span<const int> mesh_sizes,
                                          const Box& box, const Params& params,
                                          std::span<const double> k_schedule = {});

/// Reproduction test for a state inside the discrete spaces: interior
/// coefficients drawn from a fixed seed (B = C e so that div B = 0, p with
/// zero mean), sources obtained by applying the unconstrained Picard operator.
/// Returns the max coefficient error of one solve.
double discrete_patch_error(const Discretization& disc, const Params& params, std::uint32_t seed);

}  // namespace mhd
