#include "mhd/io/vtk.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>

#include "mhd/assembly/fields.hpp"

namespace mhd {

namespace {

void put(std::ostream& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out << buf;
}

void put_vec(std::ostream& out, const Vec3& v) {
  put(out, v.x());
  out << ' ';
  put(out, v.y());
  out << ' ';
  put(out, v.z());
  out << '\n';
}

}  // namespace

void write_vtk(std::ostream& out, const Discretization& disc, const State& s) {
  check_state(disc.layout(), s);
  const TetMesh& mesh = disc.mesh();
  const int nv = mesh.num_vertices();
  const int nt = mesh.num_tets();

  out << "# vtk DataFile Version 3.0\n";
  out << "mhd state step " << s.step << " t ";
  put(out, s.t);
  out << "\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << nv << " double\n";
  for (const Vec3& x : mesh.vertices) put_vec(out, x);
  out << "CELLS " << nt << ' ' << 5 * nt << '\n';
  for (const auto& t : mesh.tets) out << "4 " << t[0] << ' ' << t[1] << ' ' << t[2] << ' ' << t[3] << '\n';
  out << "CELL_TYPES " << nt << '\n';
  for (int t = 0; t < nt; ++t) out << "10\n";

  // P2 vertex DOFs are the nodal values; P1 pressure likewise.
  out << "POINT_DATA " << nv << '\n';
  out << "VECTORS velocity double\n";
  for (int v = 0; v < nv; ++v) put_vec(out, Vec3(s.u[3 * v], s.u[3 * v + 1], s.u[3 * v + 2]));
  out << "SCALARS pressure double 1\nLOOKUP_TABLE default\n";
  for (int v = 0; v < nv; ++v) {
    put(out, s.p[v]);
    out << '\n';
  }

  const std::vector<Vec3> centroid{Vec3(0.25, 0.25, 0.25)};
  std::vector<Vec3> bvals(nt), evals(nt);
  std::vector<double> divb(nt);
  for (int t = 0; t < nt; ++t) {
    const ElementContext ctx = make_point_context(disc, t, centroid);
    bvals[t] = face_field_at(ctx, s.B, 0);
    evals[t] = edge_field_at(ctx, s.E, 0);
    divb[t] = face_div_at(ctx, s.B, 0);
  }
  out << "CELL_DATA " << nt << '\n';
  out << "VECTORS B double\n";
  for (const Vec3& b : bvals) put_vec(out, b);
  out << "VECTORS E double\n";
  for (const Vec3& e : evals) put_vec(out, e);
  out << "SCALARS divB double 1\nLOOKUP_TABLE default\n";
  for (double d : divb) {
    put(out, d);
    out << '\n';
  }
}

void write_vtk(const std::string& path, const Discretization& disc, const State& s) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  write_vtk(out, disc, s);
  if (!out) throw std::runtime_error("error writing '" + path + "'");
}

}  // namespace mhd
