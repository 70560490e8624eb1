#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mhd/assembly/block_system.hpp"
#include "mhd/mesh.hpp"
#include "mhd/solver/mhd_solver.hpp"

namespace mhd {

enum class RunScheme { picard, symmetric, newton, nonlinear_picard, nonlinear_newton };

const char* run_scheme_name(RunScheme scheme);

/// Settings of one batch run.
///
/// Keys (with defaults): n = 4, lx = ly = lz = 1, Re = Rm = S = 1, k = 0.01,
/// steps = 10, scheme = picard (picard | symmetric | newton |
/// nonlinear-picard | nonlinear-newton), grad_div = on, solver = direct
/// (direct | minres), solver_tol = 1e-10, solver_maxit = 5000,
/// nonlinear_tol = 1e-8, nonlinear_maxit = 50, initial = trig (trig | zero |
/// magnetic | velocity), u_amplitude = 1, b_amplitude = 1, source = none
/// (none | forced), source_amplitude = 1, ledger = ledger.csv,
/// vtk_stride = 0 (0 disables snapshots), vtk_prefix = state,
/// mesh_sizes = 2,4, case = trig (trig | stokes | patch).
struct RunConfig {
  int n = 4;
  Box box;
  Params params;
  int steps = 10;
  RunScheme scheme = RunScheme::picard;
  LinearSolverOptions solver;
  NonlinearOptions nonlinear;
  std::string initial = "trig";
  double u_amplitude = 1.0;
  double b_amplitude = 1.0;
  std::string source = "none";
  double source_amplitude = 1.0;
  std::string ledger = "ledger.csv";
  int vtk_stride = 0;
  std::string vtk_prefix = "state";
  std::vector<int> mesh_sizes{2, 4};
  std::string manufactured_case = "trig";
};

/// Configuration problem with the offending line (0 when not tied to one).
class ConfigError : public std::runtime_error {
 public:
  ConfigError(int line, const std::string& message);
  int line() const { return line_; }

 private:
  int line_;
};

/// Parses `key = value` lines; `#` starts a comment. Unknown keys,
/// unparseable values and invalid combinations throw ConfigError.
RunConfig parse_config(std::string_view text);

/// Reads and parses a file; an unreadable file is a ConfigError on line 0.
RunConfig load_config(const std::string& path);

}  // namespace mhd
