#include "mhd/io/ledger_csv.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>

namespace mhd {

namespace {

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  return out;
}

}  // namespace

const char* ledger_csv_header() {
  return "step,t,kinetic,magnetic,viscous_dissipation,joule,identity_residual,energy_margin,divb_max,divb_l2,"
         "norm_u_1k,norm_E_curlk,norm_B_divk,norm_p_0k,bound_margin";
}

void write_ledger_csv(std::ostream& out, std::span<const EnergyRecord> records) {
  out << ledger_csv_header() << '\n';
  for (const EnergyRecord& r : records) {
    out << r.step;
    for (double v : {r.t, r.kinetic, r.magnetic, r.dissipation, r.joule, r.identity_residual, r.step_margin,
                     r.divb_max, r.divb_l2, r.norms.u, r.norms.E, r.norms.B, r.norms.p, r.bound_margin}) {
      out << ',' << g17(v);
    }
    out << '\n';
  }
}

void write_ledger_csv(const std::string& path, std::span<const EnergyRecord> records) {
  std::ofstream out = open_output(path);
  write_ledger_csv(out, records);
  if (!out) throw std::runtime_error("error writing '" + path + "'");
}

void write_convergence_csv(std::ostream& out, const ConvergenceTable& table) {
  out << "n,h,k,err_u_l2,err_u_h1,err_E_l2,err_B_l2,err_p_l2,divb_max,"
         "order_u_l2,order_u_h1,order_E_l2,order_B_l2,order_p_l2\n";
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& r = table.rows[i];
    out << r.n;
    for (double v : {r.h, r.k, r.u_l2, r.u_h1, r.E_l2, r.B_l2, r.p_l2, r.divb_max}) out << ',' << g17(v);
    if (i == 0) {
      out << ",,,,,";
    } else {
      const auto& o = table.orders[i - 1];
      for (double v : {o.u_l2, o.u_h1, o.E_l2, o.B_l2, o.p_l2}) out << ',' << g17(v);
    }
    out << '\n';
  }
}

void write_convergence_csv(const std::string& path, const ConvergenceTable& table) {
  std::ofstream out = open_output(path);
  write_convergence_csv(out, table);
  if (!out) throw std::runtime_error("error writing '" + path + "'");
}

}  // namespace mhd
