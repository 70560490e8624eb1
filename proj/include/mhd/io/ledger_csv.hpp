#pragma once

#include <iosfwd>
#include <span>
#include <string>

#include "mhd/diagnostics/energy.hpp"
#include "mhd/diagnostics/manufactured.hpp"

namespace mhd {

/// Header of the ledger CSV; columns appear in this order:
/// step,t,kinetic,magnetic,viscous_dissipation,joule,identity_residual,
/// energy_margin,divb_max,divb_l2,norm_u_1k,norm_E_curlk,norm_B_divk,
/// norm_p_0k,bound_margin
const char* ledger_csv_header();

/// One line per record, every real printed with %.17g.
void write_ledger_csv(std::ostream& out, std::span<const EnergyRecord> records);
void write_ledger_csv(const std::string& path, std::span<const EnergyRecord> records);

/// Error table of a convergence study: per mesh the errors, followed by the
/// observed orders against the previous mesh (empty on the first row).
void write_convergence_csv(std::ostream& out, const ConvergenceTable& table);
void write_convergence_csv(const std::string& path, const ConvergenceTable& table);

}  // namespace mhd
