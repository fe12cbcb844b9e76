#pragma once

#include <vector>

#include "core/params.hpp"

namespace loewner {

struct Box {
    double x0 = 0.0, x1 = 0.0, y0 = 0.0, y1 = 0.0;
    double width() const { return x1 - x0; }
    double height() const { return y1 - y0; }
    bool contains(cplx z) const {
        return z.real() >= x0 && z.real() <= x1 && z.imag() >= y0 && z.imag() <= y1;
    }
    Box expanded(double margin) const { return {x0 - margin, x1 + margin, y0 - margin, y1 + margin}; }
};

Box bounding_box(const std::vector<cplx>& pts);

double dist_point_segment(cplx p, cplx a, cplx b);

// Distance to the connected polyline through the given vertices.
double dist_point_polyline(cplx p, const std::vector<cplx>& chain);

// Distance to the nearest point of a finite set (no connectivity assumed).
double dist_point_cloud(cplx p, const std::vector<cplx>& pts);

// max over a of the distance to the cloud b.
double directed_hausdorff(const std::vector<cplx>& a, const std::vector<cplx>& b);

// Symmetric Hausdorff distance between finite point sets, O(|a|*|b|).
double hausdorff(const std::vector<cplx>& a, const std::vector<cplx>& b);

// max over a of the distance to the polyline b (respects connectivity,
// so a sparsely sampled b does not inflate the distance).
double sup_dist_to_polyline(const std::vector<cplx>& a, const std::vector<cplx>& b);

// Even-odd rule; the polygon is closed implicitly (last vertex joins the first).
bool point_in_polygon(cplx p, const std::vector<cplx>& polygon);

std::vector<double> linspace(double a, double b, int n);

// Time grid for horizons approaching t = 1, uniform in u = -log sqrt(1-t)
// with perDecade points per decade of 1-t.  Starts at 0, ends exactly at
// tEnd.  The spiral winding rate is bounded per unit u, so uniform-u grids
// sample spirals with bounded per-step turning.
std::vector<double> decade_grid_one_minus_t(double tEnd, int perDecade);

// Same construction for drivers singular in the past: uniform in
// v = log sqrt((tau+t)/tau).  Requires tau > 0.
std::vector<double> decade_grid_tau_plus_t(double tau, double tEnd, int perDecade);

} // namespace loewner
