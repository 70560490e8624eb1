#pragma once

#include <span>
#include <string>
#include <vector>

#include "mhd/assembly/discretization.hpp"

namespace mhd::cases {

// Analytic data on a box. With s_x = sin(pi x / lx) (and likewise for y, z):

/// Vector potential A = amp (s_y s_z, s_x s_z, s_x s_y). Its edge
/// circulations vanish on the boundary, so curl A has zero normal flux there.
VectorField trig_potential(const Box& box, double amp);

/// curl of trig_potential, for checks.
VectorField trig_potential_curl(const Box& box, double amp);

/// Divergence-free velocity u = amp curl(0, 0, s_x^2 s_y^2 s_z^2), zero on
/// the boundary.
VectorField trig_velocity(const Box& box, double amp);

/// Body force f = amp s_x s_y s_z (1, 1, 1).
VectorField trig_forcing(const Box& box, double amp);

/// Load vector (f, v) over vector P2 test functions (degree-6 quadrature).
std::vector<double> velocity_load(const Discretization& disc, const VectorField& f);

}  // namespace mhd::cases
