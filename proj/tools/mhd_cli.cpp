// Batch driver. Exit codes: 0 success, 1 numerical failure, 2 configuration error.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "mhd/assembly/discretization.hpp"
#include "mhd/derham.hpp"
#include "mhd/diagnostics/manufactured.hpp"
#include "mhd/io/config.hpp"
#include "mhd/io/ledger_csv.hpp"
#include "mhd/linalg/kernels.hpp"
#include "mhd/solver/transient.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kNumerical = 1;
constexpr int kConfig = 2;

struct Common {
  std::string config;
  std::string out = ".";
};

mhd::RunConfig load(const Common& c) { return c.config.empty() ? mhd::RunConfig{} : mhd::load_config(c.config); }

int mesh_info(const Common& c) {
  const mhd::RunConfig cfg = load(c);
  const mhd::Discretization disc(mhd::generate_structured_cube(cfg.n, cfg.box));
  const auto& L = disc.layout();
  std::cout << mhd::summary(disc.mesh()) << '\n';
  std::printf("unknowns: u %d, E %d, B %d, p %d, multiplier 1, total %d\n", L.n_u, L.n_E, L.n_B, L.n_p, L.total);
  std::printf("simd: %s\n", mhd::simd::isa_name(mhd::simd::active_isa()));
  return kOk;
}

int check_complex(int max_n, const Common& c) {
  const mhd::RunConfig cfg = load(c);
  bool ok = true;
  for (int n = 1; n <= max_n; ++n) {
    const mhd::TetMesh mesh = mhd::generate_structured_cube(n, cfg.box);
    for (const auto& chk : mhd::check_complex(mesh)) {
      std::printf("n=%d  %-36s %s  value %.3g  expected %.3g\n", n, chk.name.c_str(), chk.passed ? "PASS" : "FAIL",
                  chk.value, chk.expected);
      ok = ok && chk.passed;
    }
  }
  return ok ? kOk : kNumerical;
}

int run(const Common& c) {
  const mhd::RunConfig cfg = load(c);
  try {
    const mhd::TransientResult r = mhd::run_transient(cfg, c.out);
    for (const auto& w : r.summary.warnings) {
      std::cerr << "warning (step " << w.step << ", " << mhd::warning_kind_name(w.warning.kind)
                << "): " << w.warning.message << '\n';
    }
    const auto& s = r.summary;
    std::printf("scheme %s, n %d, steps %d\n", mhd::run_scheme_name(cfg.scheme), cfg.n, s.steps);
    std::printf("max div B               %.6e (relative to |b|_inf %.6e)\n", s.max_divb, s.max_divb_relative);
    std::printf("min step margin (rel)   %.6e\n", s.min_step_margin_relative);
    std::printf("min bound margin (rel)  %.6e\n", s.min_bound_margin_relative);
    std::printf("max identity residual   %.6e\n", s.max_identity_residual_relative);
    std::printf("energy non-increasing   %s\n", s.energy_monotone ? "yes" : "no");
    for (const auto& f : s.files) std::printf("wrote %s\n", f.c_str());
  } catch (const mhd::TransientError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumerical;
  }
  return kOk;
}

int convergence(const Common& c) {
  const mhd::RunConfig cfg = load(c);
  if (cfg.mesh_sizes.size() < 2) throw mhd::ConfigError(0, "convergence needs at least two mesh_sizes");
  mhd::ConvergenceTable t;
  try {
    t = mhd::manufactured_convergence(cfg.manufactured_case, cfg.mesh_sizes, cfg.box, cfg.params);
  } catch (const std::invalid_argument&) {
    throw;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumerical;
  }
  for (const auto& w : t.warnings) {
    std::cerr << "warning (" << mhd::warning_kind_name(w.kind) << "): " << w.message << '\n';
  }
  std::printf("case %s\n%4s %10s %12s %12s %12s %12s %12s\n", t.case_name.c_str(), "n", "h", "u L2", "u H1",
              "E L2", "B L2", "p L2");
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const auto& r = t.rows[i];
    std::printf("%4d %10.4g %12.4e %12.4e %12.4e %12.4e %12.4e\n", r.n, r.h, r.u_l2, r.u_h1, r.E_l2, r.B_l2, r.p_l2);
    if (i + 1 < t.rows.size()) {
      const auto& o = t.orders[i];
      std::printf("%4s %10s %12.3f %12.3f %12.3f %12.3f %12.3f\n", "", "order", o.u_l2, o.u_h1, o.E_l2, o.B_l2,
                  o.p_l2);
    }
  }
  std::filesystem::create_directories(c.out);
  const std::string path = (std::filesystem::path(c.out) / "convergence.csv").string();
  mhd::write_convergence_csv(path, t);
  std::printf("wrote %s\n", path.c_str());
  return kOk;
}

int precond_bench(const Common& c) {
  mhd::RunConfig cfg = load(c);
  if (cfg.scheme != mhd::RunScheme::symmetric) {
    std::cerr << "note: benchmarking the symmetric scheme (config scheme " << mhd::run_scheme_name(cfg.scheme)
              << " ignored)\n";
  }
  bool ok = true;
  std::printf("%4s %10s %10s %14s %14s %14s\n", "n", "unknowns", "minres_it", "rel_residual", "diff_direct",
              "max_coef_diff");
  for (int n : cfg.mesh_sizes) {
    const mhd::PreconditionerBenchRow r = mhd::preconditioner_bench(cfg, n);
    std::printf("%4d %10d %10d %14.4e %14.4e %14.4e%s\n", r.n, r.unknowns, r.iterations, r.relative_residual,
                r.difference_to_direct, r.max_coefficient_difference, r.converged ? "" : "  (not converged)");
    ok = ok && r.converged;
  }
  return ok ? kOk : kNumerical;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Structure-preserving mixed finite elements for incompressible MHD"};
  app.require_subcommand(1);
  Common common;
  int max_n = 3;
  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", common.config, "key = value configuration file")->check(CLI::ExistingFile);
    sub->add_option("--out", common.out, "output directory");
  };
  auto* s_mesh = app.add_subcommand("mesh-info", "print mesh and unknown counts");
  auto* s_check = app.add_subcommand("check-complex", "exactness, rank and commuting checks on n = 1..max-n");
  auto* s_run = app.add_subcommand("run", "time stepping with ledger CSV and VTK snapshots");
  auto* s_conv = app.add_subcommand("convergence", "manufactured-solution convergence study");
  auto* s_bench = app.add_subcommand("precond-bench", "MINRES iteration counts over mesh_sizes");
  for (auto* s : {s_mesh, s_check, s_run, s_conv, s_bench}) add_common(s);
  s_check->add_option("--max-n", max_n, "largest mesh size")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfig;
  }

  try {
    if (*s_mesh) return mesh_info(common);
    if (*s_check) return check_complex(max_n, common);
    if (*s_run) return run(common);
    if (*s_conv) return convergence(common);
    if (*s_bench) return precond_bench(common);
  } catch (const mhd::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumerical;
  }
  return kOk;
}
