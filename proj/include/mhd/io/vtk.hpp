#pragma once

#include <iosfwd>
#include <string>

#include "mhd/assembly/discretization.hpp"
#include "mhd/state.hpp"

namespace mhd {

/// Legacy ASCII UNSTRUCTURED_GRID snapshot. Point data: velocity (P2 values
/// at the vertices) and pressure. Cell data: B and E at the barycenter and
/// the cellwise div B.
void write_vtk(std::ostream& out, const Discretization& disc, const State& s);
void write_vtk(const std::string& path, const Discretization& disc, const State& s);

}  // namespace mhd
