#pragma once

#include <span>

#include "mhd/assembly/discretization.hpp"

namespace mhd {

// Evaluation of discrete fields at the points of an element context.

Vec3 velocity_at(const ElementContext& ctx, std::span<const double> u, int q);
/// Row c holds the gradient of component c.
Mat3 velocity_gradient_at(const ElementContext& ctx, std::span<const double> u, int q);
Vec3 edge_field_at(const ElementContext& ctx, std::span<const double> e, int q);
Vec3 edge_curl_at(const ElementContext& ctx, std::span<const double> e, int q);
Vec3 face_field_at(const ElementContext& ctx, std::span<const double> b, int q);
double face_div_at(const ElementContext& ctx, std::span<const double> b, int q);
double pressure_at(const ElementContext& ctx, std::span<const double> p, int q);

/// Context at arbitrary reference points of tet t (weights are left empty).
ElementContext make_point_context(const Discretization& disc, int t, std::span<const Vec3> ref_points);

/// Estimate of max |B_h| over the domain from the 4 vertices and barycenter of
/// every tet.
double face_field_max_norm(const Discretization& disc, std::span<const double> b);

}  // namespace mhd
