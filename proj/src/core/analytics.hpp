#pragma once

#include <optional>
#include <string>
#include <vector>

#include "core/driver.hpp"
#include "core/flow.hpp"
#include "core/params.hpp"
#include "core/trace.hpp"

namespace loewner {

// ---------------------------------------------------------------- time-1 hull

enum class HullKind { SimpleArc, LoopWithInterior, LoopWithTail };

const char* hull_kind_name(HullKind k);

struct Time1Options {
    int perDecade = 64;           // trace samples per decade of 1 - t
    double traceEpsilon = 1e-8;   // trace up to t = 1 - traceEpsilon
    double endpointTol = 1e-3;
    double selfHitTol = 1e-3;
    int interiorGrid = 64;        // interior sampling lattice, per axis
    double oracleFraction = 0.05; // share of interior samples re-checked by the flow
    unsigned seed = 1;            // subsample selection
};

// The hull of c*sqrt(1-t) at its singular time, assembled from traces.
// A positive-Re-alpha coefficient gives a simple arc ending at A and B;
// a negative one closes a loop at B and swallows the enclosed region;
// on the boundary between them the upper curve returns to c before
// time 1 and the lower one survives as a tail.
struct Time1Hull {
    HullKind kind = HullKind::SimpleArc;
    PhaseKind phase = PhaseKind::PositiveReAlpha;
    cplx c;
    Family1Params params;
    HullTrace upper, lower; // raw traces; for a tail hull `upper` includes post-hit samples
    // Loop kinds: closed polyline, upper curve out and lower curve back.
    std::vector<cplx> loop;
    // LoopWithTail: the surviving lower curve.
    std::vector<cplx> tail;
    // LoopWithInterior: lattice points inside the loop (all swallowed by time 1).
    std::vector<cplx> interiorSamples;
    // SimpleArc: the {A, B} limits of the two sides.
    cplx endpointUpper, endpointLower;
    // LoopWithTail: where and when the upper curve returns to its start.
    cplx hitPoint;
    double tHit = 0.0;
};

// Assembles the time-1 hull for the phase of c.  Throws DegenerateC at
// c = +-4 and InconsistentPhase if the traced geometry contradicts the
// classification (an endpoint missing or far off, a loop that does not
// close, a missing self-hit, or an interior sample the flow leaves
// uncaptured).
Time1Hull time1_hull(cplx c, const Time1Options& opt = {});

// Boundary points reachable from infinity at time 1: 2 for a simple
// arc, 1 otherwise.  Cross-checked against the segment count of the
// dual sqrt-t hull; disagreement throws InconsistentPhase.
int accessible_point_count(const Time1Hull& hull);

// ------------------------------------------------------- critical-time check

struct CriticalTimeCheck {
    double tHit = 0.0;     // measured self-hit time of the upper trace
    double tFormula = 0.0; // 1 - exp(-4*pi*Im(alpha))
    double gap = 0.0;
};

// For c on the phase boundary (|Re alpha| < 1e-8 after folding): traces
// the upper curve, detects its return to c, and compares the hit time
// with the closed-form prediction.  Throws NoSelfHit if the trace
// reaches t = 1 - 1e-8 without returning.
CriticalTimeCheck critical_time_check(cplx c, const Time1Options& opt = {});

// ----------------------------------------------------------------- right hull

// Right hull R_T of the driver, traced as curves: the left hull of the
// dual driver rotated by i.  Family duals stay in closed form (a
// sqrt(1-t) driver dualizes to sqrt(tau+t) and vice versa), so the
// curves come from the implicit tracer; tau = 0 duals use the exact
// sqrt-t rays and sampled drivers fall back to the zipper.
std::vector<HullTrace> right_hull_trace(const Driver& d, double T, int perDecade = 64);

// Same set on a capture grid.  `rSpec` describes the region in the
// right-hull plane; the dual grid is its rotation by -i, evaluated with
// hull_grid and rotated back, so the returned centres lie on rSpec's
// lattice.
std::vector<cplx> right_hull_grid(const Driver& d, double T, const GridSpec& rSpec,
                                  const FlowOptions& opt = {});

// ----------------------------------------------------------------- flow morph

struct FlowMorph {
    double t = 0.0;
    std::vector<cplx> imageSet;  // g_t of the traced hull points not yet captured
    std::vector<cplx> rightHull; // R_t sampled as curves
};

// Forward-flows the traced time-1 hull of c*sqrt(1-t): every sample
// accreted after t is still alive, and its image under g_t lands on
// the hull of the shifted driver outside R_t.  Pairs the image cloud
// with the right hull at t.  Samples accreted before t are skipped;
// boundary-grazing samples the flow reports captured are dropped.
FlowMorph flow_morph(cplx c, double t, const std::vector<HullTrace>& hullOfTime1,
                     const FlowOptions& opt = {});

// ------------------------------------------------------ property verification

enum class HullProperty { Translation, Scaling, Reflection, Concatenation, Duality };

const char* property_name(HullProperty p);

struct PropertyParams {
    cplx shiftBy = cplx(1.5, 0.5);            // Translation
    double a = 2.0;                           // Scaling
    ReflectAxis axis = ReflectAxis::RealAxis; // Reflection
    double t = 0.4;                           // Concatenation split time
    double s = 0.3;                           // Concatenation continuation length
    int perDecade = 64;                       // implicit-trace resolution
    int zipperN = 400;                        // zipper resolution
    double overlapTrim = 5e-3;                // Concatenation: drop points this close to R_t
    double tol = 1e-2;                        // acceptance threshold on the distance
};

struct PropertyReport {
    HullProperty property = HullProperty::Translation;
    double hausdorff = 0.0; // symmetric sup distance between the two pipelines
    double tol = 1e-2;
    bool passed = false;
    cplx c;                 // coefficient of the driver tested
    PropertyParams params;
    std::string detail;     // one line naming the two pipelines compared
};

// Verifies one hull identity by computing both sides through different
// pipelines (implicit tracer, zipper, ODE flow) and measuring the
// symmetric sample-to-polyline distance:
//   Translation   hull(lambda + z0) = hull(lambda) + z0
//   Scaling       hull(a*lambda(./a^2)) = a*hull(lambda), times t/a^2
//   Reflection    hull(conj/−conj/−lambda) = reflected hull
//   Concatenation g_t(L_{t+s} \ L_t) = L_{s,lambda(t+.)} \ R_t
//   Duality       R_T = i * L_T of the dual driver
// The driver's own horizon d.T is the reference time for all but
// Concatenation, which needs t + s <= d.T.
PropertyReport verify_property(HullProperty p, const Driver& d, const PropertyParams& pp = {});

// ------------------------------------------------------------------- spirals

struct SpiralDiagnostics {
    cplx center;
    std::vector<double> unwoundArg; // continuous arg(z - center) along the trace
    double winding = 0.0;           // (final - initial) / 2*pi
};

// Continuous argument of (z_t - center) along a trace and the net
// winding count.  Meaningful when consecutive samples rotate by less
// than pi about the center, which the decade grids guarantee for the
// endpoint spirals; `center` is normally the trace's endpoint.
SpiralDiagnostics spiral_diagnostics(const HullTrace& trace, cplx center);

} // namespace loewner
