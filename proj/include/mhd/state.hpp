#pragma once

#include <span>
#include <vector>

#include "mhd/assembly/discretization.hpp"

namespace mhd {

/// Coefficients of (u, E, B, p) at one time level. `lambda` is the
/// mean-pressure multiplier (zero for consistent data).
struct State {
  std::vector<double> u;
  std::vector<double> E;
  std::vector<double> B;
  std::vector<double> p;
  double lambda = 0.0;
  double t = 0.0;
  int step = 0;
};

State zero_state(const DofLayout& layout);

/// Monolithic vector [u | E | B | p | lambda].
std::vector<double> pack(const DofLayout& layout, const State& s);
State unpack(const DofLayout& layout, std::span<const double> x);

/// Throws std::invalid_argument when a block has the wrong length.
void check_state(const DofLayout& layout, const State& s);

}  // namespace mhd
