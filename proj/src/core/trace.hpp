#pragma once

#include <optional>
#include <vector>

#include "core/driver.hpp"
#include "core/params.hpp"

namespace loewner {

// The hull of a sqrt driver is the union of two curves leaving the
// starting point in opposite directions; Upper is the one whose initial
// tangent points toward +i (seed +i*sqrt(8u) resp. +i*sqrt(8*tau*v)).
enum class TraceSide { Upper, Lower };

enum class TraceSource { Implicit, Zipper, ClosedForm };

struct TraceSample {
    double t = 0.0;
    cplx z;
    // Continuously tracked arguments of z - A and z - B (family 1) or
    // z - D*sqrt(tau) and z - E*sqrt(tau) (family 2).  Total winding of
    // the curve about an endpoint reads off as the net change.
    double argZA = 0.0;
    double argZB = 0.0;
    double residual = 0.0; // tip-equation mismatch left by the corrector
};

struct HullTrace {
    TraceSide side = TraceSide::Upper;
    TraceSource source = TraceSource::Implicit;
    std::vector<TraceSample> samples;
    // Endpoint of the curve at the singular time (family 1 only): the
    // A or B the side converges to, or B for both sides of a loop.
    // Empty for transitional coefficients and for family 2, whose
    // curves grow without bound.
    std::optional<cplx> endpoint;
    double endpointGap = 0.0; // |last sample - endpoint|
    // First time the curve returns to its starting point (within
    // selfHitTol); transitional drivers close a loop there.  The point
    // comes from the dip refinement, not the sample grid, because the
    // curve speeds up sharply on approach.
    std::optional<double> selfHitTime;
    std::optional<cplx> selfHitPoint;
    bool lipGuardExceeded = false; // zipper runs only
};

struct TraceOptions {
    double newtonTol = 1e-10;  // residual bound for the corrector
    int newtonMaxIter = 8;     // per substep before halving the step
    double maxArgStep = 0.5;   // max rotation about either pole per substep
    double selfHitTol = 1e-3;  // return distance that counts as a hit
};

// Traces both sides of the hull of c*sqrt(1-t) by continuing the
// implicit tip equation in the clock u = -log sqrt(1-t).  Samples are
// emitted exactly at the given times, which must be strictly increasing
// within [0, 1).  Throws DegenerateC at c = +-4 and NewtonDivergence if
// continuation fails.
std::vector<HullTrace> trace_tips_family1(cplx c, const std::vector<double>& tGrid,
                                          const TraceOptions& opt = {});

// Same for c*sqrt(tau+t) in the clock v = log sqrt((tau+t)/tau).
// Requires tau > 0: the tau = 0 hull is covered in closed form by
// sqrt_t_hull.  There is no t = 1 horizon here; as t grows the tips
// either escape to infinity or (one of them, when a pole of the tip
// equation lies on the hull's side) decelerate into that finite pole,
// so `endpoint` stays unset.
std::vector<HullTrace> trace_tips_family2(cplx c, double tau,
                                          const std::vector<double>& tGrid,
                                          const TraceOptions& opt = {});

// Tip-equation mismatch of a sample, recomputed from its tracked
// arguments.  Exact zero along the true curve; tests use it as the
// defining invariant of the trace.
double tip_residual_family1(const Family1Params& p, const TraceSample& s);
double tip_residual_family2(const Family2Params& p, const TraceSample& s);

// Hull of c*sqrt(t) at time t, in closed form.  The hull is one or two
// straight segments from the origin; tipUpper/tipLower are the limits
// of the two prime ends of the growing slit.  When segmentCount == 1
// the tips coincide (or are collinear on one ray in the borderline
// Re delta == 0 case).
struct SqrtTHull {
    cplx c;
    double t = 0.0;
    cplx tipUpper, tipLower;
    int segmentCount = 1;
};

SqrtTHull sqrt_t_hull(cplx c, double t);

struct ZipperOptions {
    int samplesPerStep = 1;      // >1 adds interior samples of each slit
    double lipGuard = 1.0 / 3.0; // warn when |dLambda|/sqrt(dt) exceeds this
};

// Discretizes the driver into n elementary sqrt-slit maps and threads
// the growing tips back through their inverses, yielding both sides of
// the hull without any implicit-equation machinery.  Works for every
// driver form; the partition is chosen per form so the per-step
// coefficient stays small.  For a pure c*sqrt(t) driver every step is
// the same driver restarted, the composed inverses telescope to the
// closed form, and the result is exact for any n.  Complements
// trace_tips_* as an independent construction of the same curves.
std::vector<HullTrace> zipper_trace(const Driver& d, int n, const ZipperOptions& opt = {});

} // namespace loewner
