#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "core/driver.hpp"

namespace loewner {

enum class PointStatus { Alive, Captured, Underflow };

struct FlowOptions {
    double odeTol = 1e-9;        // step-doubling error per unit of integration clock
    double captureRadius = 1e-5; // |g - lambda| at which the point counts as captured
    double minStep = 1e-14;      // clock units; falling below reports Underflow
    double maxStep = 1e-2;       // clock units
    double stepSafety = 0.5;       // extra clamp dt <= stepSafety*|g-lambda|^2/2
    double time1Epsilon = 1e-9;    // family-1 full-horizon integration stops at u - eps
    double time1RadiusScale = 6.0; // capture-at-horizon test radius (|c|+scale)*sqrt(u-t)
    bool recordTrajectory = false;
};

struct FlowResult {
    PointStatus status = PointStatus::Alive;
    cplx g;         // final image
    double t = 0.0; // time reached; capture time when Captured
    long steps = 0;
    std::vector<std::pair<double, cplx>> trajectory; // accepted steps, when recorded
};

// Integrates dg/dt = 2/(g - lambda(t)) from g(0) = z up to time T with
// step-doubled RK4.  Closed driver forms are integrated in a square-root
// clock that removes their cusp (see flow.cpp), which is what the step
// options refer to.  Near capture the field blows up like 2/|g-lambda|,
// so the step is clamped by the time-to-collision estimate; the point is
// declared Captured once |g - lambda| <= captureRadius (the reported
// capture time is early by at most the captureRadius^2 scale).  For
// Alive points t ends within minStep of T; Captured reports the
// detection time.
//
// For SqrtOneMinusT drivers integrated to their full horizon (T = u,
// where lambda' is singular) the run stops at u - time1Epsilon and the
// surviving point is classified by the scale-invariant threshold
// |g - lambda| <= (|c| + time1RadiusScale)*sqrt(u - t): everything the
// horizon swallows is within a shrinking disk of that radius, while
// escaped points keep |g - lambda| of order one.  Captures at the
// horizon report t = u.
FlowResult flow_point(cplx z, const Driver& d, double T, const FlowOptions& opt = {});

struct GridSpec {
    double x0 = 0.0, x1 = 1.0, y0 = 0.0, y1 = 1.0;
    int nx = 2, ny = 2;
    double dx() const { return (x1 - x0) / nx; }
    double dy() const { return (y1 - y0) / ny; }
    double cellDiag() const { return std::sqrt(dx() * dx() + dy() * dy()); }
    cplx center(int ix, int iy) const {
        return {x0 + (ix + 0.5) * dx(), y0 + (iy + 0.5) * dy()};
    }
};

struct GridCell {
    PointStatus status = PointStatus::Alive;
    double tCapture = 0.0; // valid when Captured
};

struct CaptureGrid {
    GridSpec spec;
    std::vector<GridCell> cells; // row-major, iy*nx + ix
    long underflowCount = 0;
    GridCell& at(int ix, int iy) { return cells[static_cast<size_t>(iy) * spec.nx + ix]; }
    const GridCell& at(int ix, int iy) const { return cells[static_cast<size_t>(iy) * spec.nx + ix]; }
    std::vector<cplx> captured_centers() const;
};

// Flows every cell center independently; cells are distributed over
// `threads` workers pulling from a shared atomic counter, output is
// deterministic regardless of scheduling.  threads <= 0 picks the
// hardware count.
CaptureGrid hull_grid(const Driver& d, double T, const GridSpec& spec, const FlowOptions& opt = {},
                      int threads = 0);

// Vertical and horizontal strips spanned by the driver's values on [0, T].
// The left hull lies in the vertical strip and the right hull in the
// horizontal one, so the strips make sound default grid regions once
// padded (the hull can stick out of the *other* strip freely).
struct HullBounds {
    double reMin = 0.0, reMax = 0.0;
    double imMin = 0.0, imMax = 0.0;
};
HullBounds hull_bounds(const Driver& d, double T, int samples = 4096);

// Default grid region for a driver: the value strips padded on every side.
GridSpec default_grid_region(const Driver& d, double T, int nx, int ny, double pad);

} // namespace loewner
