#include "core/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "core/geometry.hpp"

namespace loewner {

namespace {

const double kPi = 3.14159265358979323846;

const HullTrace& upper_of(const std::vector<HullTrace>& traces) {
    return traces[0].side == TraceSide::Upper ? traces[0] : traces[1];
}

const HullTrace& lower_of(const std::vector<HullTrace>& traces) {
    return traces[0].side == TraceSide::Upper ? traces[1] : traces[0];
}

std::vector<cplx> polyline_of(const HullTrace& tr) {
    std::vector<cplx> pts;
    pts.reserve(tr.samples.size());
    for (const auto& s : tr.samples) pts.push_back(s.z);
    return pts;
}

std::vector<std::vector<cplx>> chains_of(const std::vector<HullTrace>& traces) {
    std::vector<std::vector<cplx>> out;
    for (const auto& tr : traces) out.push_back(polyline_of(tr));
    return out;
}

double dist_to_chains(cplx z, const std::vector<std::vector<cplx>>& chains) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& ch : chains)
        if (!ch.empty()) best = std::min(best, dist_point_polyline(z, ch));
    return best;
}

// Symmetric sup distance between two hulls given as polyline bundles:
// every sample of one must lie near some curve of the other.  Point-to-
// polyline (not point-to-point) so unequal sample densities do not
// inflate the result.
double chains_distance(const std::vector<std::vector<cplx>>& a,
                       const std::vector<std::vector<cplx>>& b) {
    size_t na = 0, nb = 0;
    for (const auto& ch : a) na += ch.size();
    for (const auto& ch : b) nb += ch.size();
    if (na == 0 || nb == 0)
        fail(Status::BadArgument, "hull comparison produced an empty point set");
    double worst = 0.0;
    for (const auto& ch : a)
        for (cplx z : ch) worst = std::max(worst, dist_to_chains(z, b));
    for (const auto& ch : b)
        for (cplx z : ch) worst = std::max(worst, dist_to_chains(z, a));
    return worst;
}

std::vector<HullTrace> closed_form_sqrt_t(const Driver& d, const std::vector<double>& grid) {
    HullTrace up, low;
    up.side = TraceSide::Upper;
    low.side = TraceSide::Lower;
    up.source = low.source = TraceSource::ClosedForm;
    for (double t : grid) {
        if (!(t > 0.0)) {
            up.samples.push_back({0.0, d.offset, 0.0, 0.0, 0.0});
            low.samples.push_back({0.0, d.offset, 0.0, 0.0, 0.0});
            continue;
        }
        const SqrtTHull h = sqrt_t_hull(d.c, t);
        up.samples.push_back({t, h.tipUpper + d.offset, 0.0, 0.0, 0.0});
        low.samples.push_back({t, h.tipLower + d.offset, 0.0, 0.0, 0.0});
    }
    return {up, low};
}

// Appends a cluster of times approaching `at` from above, log-spaced in
// the offset down to scale * 10^-6, then restores sorted uniqueness.
void refine_grid_near(std::vector<double>& grid, double at, double scale, int perDecade) {
    for (int j = 0; j <= 6 * perDecade; ++j)
        grid.push_back(at + scale * std::pow(10.0, -double(j) / perDecade));
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
}

// Default emission grid for a reference trace: decade spacing toward the
// horizon, since the tips move like sqrt of the remaining time there,
// plus a matching cluster just after 0, where the arms leave the start
// point at unbounded speed.
std::vector<double> default_grid(const Driver& d, int perDecade) {
    std::vector<double> g;
    switch (d.form) {
    case DriverForm::SqrtOneMinusT: {
        const double tEnd = std::min(d.T / d.u, 1.0 - 1e-8);
        g = decade_grid_one_minus_t(tEnd, perDecade);
        for (double& t : g) t *= d.u;
        break;
    }
    case DriverForm::SqrtTauPlusT:
        if (d.tau > 0.0) {
            g = decade_grid_tau_plus_t(d.tau, d.T, perDecade);
        } else {
            g.push_back(0.0);
            for (int j = 8 * perDecade; j >= 0; --j)
                g.push_back(d.T * std::pow(10.0, -double(j) / perDecade));
        }
        break;
    case DriverForm::Sampled: return {};
    }
    refine_grid_near(g, 0.0, d.T, perDecade);
    return g;
}

// Trace of the hull of a closed-form driver on the given grid of driver
// times, offset and clock scaling applied so samples are in the driver's
// own plane and time.  A sqrt(u-t) driver is the u = 1 hull rescaled by
// sqrt(u); tau = 0 evaluates the closed form directly; sampled drivers
// fall back to the zipper, which ignores the grid and steps uniformly.
std::vector<HullTrace> reference_trace(const Driver& d, const std::vector<double>& grid) {
    std::vector<HullTrace> traces;
    switch (d.form) {
    case DriverForm::SqrtOneMinusT: {
        const double u = d.u;
        std::vector<double> hg;
        hg.reserve(grid.size());
        for (double g : grid) {
            const double tt = std::min(g / u, 1.0 - 1e-8);
            if (hg.empty() ? tt >= 0.0 : tt > hg.back()) hg.push_back(tt);
        }
        traces = trace_tips_family1(d.c, hg);
        const double root = std::sqrt(u);
        for (auto& tr : traces) {
            for (auto& s : tr.samples) {
                s.t *= u;
                s.z = root * s.z + d.offset;
            }
            if (tr.endpoint) tr.endpoint = root * *tr.endpoint + d.offset;
        }
        return traces;
    }
    case DriverForm::SqrtTauPlusT:
        if (d.tau > 0.0) {
            traces = trace_tips_family2(d.c, d.tau, grid);
            for (auto& tr : traces)
                for (auto& s : tr.samples) s.z += d.offset;
            return traces;
        }
        return closed_form_sqrt_t(d, grid);
    case DriverForm::Sampled: {
        ZipperOptions zo;
        zo.samplesPerStep = 4;
        return zipper_trace(d, std::max<int>(1, static_cast<int>(grid.size() / 4)), zo);
    }
    }
    fail(Status::Internal, "unhandled driver form");
}

std::vector<HullTrace> reference_trace(const Driver& d, int perDecade) {
    if (d.form == DriverForm::Sampled) {
        ZipperOptions zo;
        zo.samplesPerStep = 4;
        return zipper_trace(d, std::max(1, perDecade * 4), zo);
    }
    return reference_trace(d, default_grid(d, perDecade));
}

void rotate_traces(std::vector<HullTrace>& traces, cplx rot) {
    for (auto& tr : traces) {
        for (auto& s : tr.samples) s.z *= rot;
        if (tr.endpoint) tr.endpoint = rot * *tr.endpoint;
    }
}

} // namespace

const char* hull_kind_name(HullKind k) {
    switch (k) {
    case HullKind::SimpleArc: return "SimpleArc";
    case HullKind::LoopWithInterior: return "LoopWithInterior";
    case HullKind::LoopWithTail: return "LoopWithTail";
    }
    return "?";
}

const char* property_name(HullProperty p) {
    switch (p) {
    case HullProperty::Translation: return "Translation";
    case HullProperty::Scaling: return "Scaling";
    case HullProperty::Reflection: return "Reflection";
    case HullProperty::Concatenation: return "Concatenation";
    case HullProperty::Duality: return "Duality";
    }
    return "?";
}

Time1Hull time1_hull(cplx c, const Time1Options& opt) {
    Time1Hull out;
    out.c = c;
    out.params = family1_params(c);
    const Phase ph = classify_phase(c);
    out.phase = ph.kind;

    TraceOptions to;
    to.selfHitTol = opt.selfHitTol;
    const auto grid = decade_grid_one_minus_t(1.0 - opt.traceEpsilon, opt.perDecade);
    auto traces = trace_tips_family1(c, grid, to);
    out.upper = upper_of(traces);
    out.lower = lower_of(traces);

    const auto near = [](cplx a, cplx b) { return std::abs(a - b) <= 1e-9; };

    // |z - endpoint| decays like (1 - t)^q with q = Re(alpha) or Re(beta),
    // so a slow spiral can legitimately sit far from its endpoint at the
    // trace horizon.  Approach is judged by the decade-over-decade decay
    // of the gap, with small gaps accepted outright.
    const auto approaches = [&](const HullTrace& tr) {
        if (!tr.endpoint || tr.samples.empty()) return false;
        if (tr.endpointGap <= opt.endpointTol) return true;
        const double em = 1.0 - tr.samples.back().t;
        for (auto it = tr.samples.rbegin(); it != tr.samples.rend(); ++it)
            if (1.0 - it->t >= 10.0 * em)
                return tr.endpointGap < std::abs(it->z - *tr.endpoint);
        return false;
    };

    switch (ph.kind) {
    case PhaseKind::PositiveReAlpha: {
        out.kind = HullKind::SimpleArc;
        if (!out.upper.endpoint || !out.lower.endpoint)
            fail(Status::InconsistentPhase, "simple-arc phase but a trace carries no endpoint");
        out.endpointUpper = *out.upper.endpoint;
        out.endpointLower = *out.lower.endpoint;
        const cplx A = out.params.A, B = out.params.B;
        const bool pairedAB = (near(out.endpointUpper, A) && near(out.endpointLower, B)) ||
                              (near(out.endpointUpper, B) && near(out.endpointLower, A));
        if (!pairedAB)
            fail(Status::InconsistentPhase, "simple-arc endpoints are not the pair {A, B}");
        if (!approaches(out.upper) || !approaches(out.lower))
            fail(Status::InconsistentPhase, "a simple-arc trace did not approach its endpoint");
        break;
    }
    case PhaseKind::NegativeReAlpha: {
        out.kind = HullKind::LoopWithInterior;
        // The reflection fold behind the classification can swap the root
        // labels outside the first quadrant (A - B = sqrtDisc is kept
        // exact there), so the closure point is pinned as the
        // small-modulus root rather than as the literal B.
        const cplx closure =
            std::abs(out.params.B) <= std::abs(out.params.A) ? out.params.B : out.params.A;
        if (!out.upper.endpoint || !out.lower.endpoint ||
            !near(*out.upper.endpoint, closure) || !near(*out.lower.endpoint, closure))
            fail(Status::InconsistentPhase, "loop phase but the sides do not both run to B");
        if (!approaches(out.upper) || !approaches(out.lower))
            fail(Status::InconsistentPhase, "loop did not close at B");
        out.loop.reserve(out.upper.samples.size() + out.lower.samples.size());
        for (const auto& s : out.upper.samples) out.loop.push_back(s.z);
        for (auto it = out.lower.samples.rbegin(); it != out.lower.samples.rend(); ++it)
            out.loop.push_back(it->z);

        const Box bb = bounding_box(out.loop);
        const int ng = opt.interiorGrid;
        for (int j = 0; j < ng; ++j)
            for (int i = 0; i < ng; ++i) {
                cplx p(bb.x0 + (i + 0.5) * bb.width() / ng, bb.y0 + (j + 0.5) * bb.height() / ng);
                if (point_in_polygon(p, out.loop)) out.interiorSamples.push_back(p);
            }
        // spot-check a random subsample against the flow: everything
        // inside the loop must be swallowed by time 1
        if (!out.interiorSamples.empty() && opt.oracleFraction > 0.0) {
            std::vector<size_t> idx(out.interiorSamples.size());
            std::iota(idx.begin(), idx.end(), size_t{0});
            std::mt19937 rng(opt.seed);
            std::shuffle(idx.begin(), idx.end(), rng);
            const size_t nCheck = std::max<size_t>(
                1, static_cast<size_t>(opt.oracleFraction * double(idx.size())));
            const Driver d = sqrt_one_minus_t(c);
            for (size_t k = 0; k < nCheck; ++k) {
                const FlowResult r = flow_point(out.interiorSamples[idx[k]], d, 1.0);
                if (r.status != PointStatus::Captured)
                    fail(Status::InconsistentPhase,
                         "a loop-interior sample is not captured by time 1");
            }
        }
        break;
    }
    case PhaseKind::Transitional: {
        out.kind = HullKind::LoopWithTail;
        if (!out.upper.selfHitTime)
            fail(Status::InconsistentPhase,
                 "transitional phase but the upper trace never returns to its start");
        out.tHit = *out.upper.selfHitTime;
        out.hitPoint = *out.upper.selfHitPoint;
        const cplx start = out.upper.samples.front().z;
        for (const auto& s : out.upper.samples)
            if (s.t <= out.tHit) out.loop.push_back(s.z);
        out.loop.push_back(out.hitPoint);
        if (std::abs(out.hitPoint - start) > 2.0 * opt.selfHitTol)
            fail(Status::InconsistentPhase, "self-hit point is far from the starting point");
        out.tail = polyline_of(out.lower);
        break;
    }
    }
    return out;
}

int accessible_point_count(const Time1Hull& hull) {
    const int count = hull.kind == HullKind::SimpleArc ? 2 : 1;
    const SqrtTHull dualHull = sqrt_t_hull(cplx(0.0, -1.0) * hull.c, 1.0);
    if ((count == 2) != (dualHull.segmentCount == 2))
        fail(Status::InconsistentPhase,
             "accessible-point count disagrees with the dual segment count");
    return count;
}

CriticalTimeCheck critical_time_check(cplx c, const Time1Options& opt) {
    const Phase ph = classify_phase(c, 1e-8);
    if (ph.kind != PhaseKind::Transitional)
        fail(Status::BadArgument, "coefficient is not on the phase boundary");
    TraceOptions to;
    to.selfHitTol = opt.selfHitTol;
    const auto grid = decade_grid_one_minus_t(1.0 - 1e-8, opt.perDecade);
    const auto traces = trace_tips_family1(c, grid, to);
    const HullTrace& up = upper_of(traces);
    if (!up.selfHitTime)
        fail(Status::NoSelfHit, "upper trace reached t = 1 - 1e-8 without returning to its start");
    CriticalTimeCheck out;
    out.tHit = *up.selfHitTime;
    out.tFormula = ph.criticalTime ? *ph.criticalTime : 1.0 - std::exp(-4.0 * kPi * ph.imAlpha);
    out.gap = std::abs(out.tHit - out.tFormula);
    return out;
}

std::vector<HullTrace> right_hull_trace(const Driver& d, double T, int perDecade) {
    auto traces = reference_trace(dual(with_horizon(d, T)), perDecade);
    rotate_traces(traces, cplx(0.0, 1.0));
    return traces;
}

std::vector<cplx> right_hull_grid(const Driver& d, double T, const GridSpec& rSpec,
                                  const FlowOptions& opt) {
    const Driver dd = dual(with_horizon(d, T));
    // the dual plane is the right-hull plane rotated by -i: (x, y) -> (y, -x)
    GridSpec ds;
    ds.x0 = rSpec.y0;
    ds.x1 = rSpec.y1;
    ds.nx = rSpec.ny;
    ds.y0 = -rSpec.x1;
    ds.y1 = -rSpec.x0;
    ds.ny = rSpec.nx;
    const CaptureGrid g = hull_grid(dd, T, ds, opt);
    std::vector<cplx> out;
    const cplx rot(0.0, 1.0);
    for (cplx z : g.captured_centers()) out.push_back(rot * z);
    return out;
}

FlowMorph flow_morph(cplx c, double t, const std::vector<HullTrace>& hullOfTime1,
                     const FlowOptions& opt) {
    if (!(t > 0.0) || !(t < 1.0)) fail(Status::BadArgument, "flow_morph needs 0 < t < 1");
    const Driver d = sqrt_one_minus_t(c);
    FlowMorph out;
    out.t = t;
    for (const auto& tr : hullOfTime1)
        for (const auto& s : tr.samples) {
            if (s.t <= t) continue;
            const FlowResult r = flow_point(s.z, d, t, opt);
            if (r.status != PointStatus::Alive) continue;
            out.imageSet.push_back(r.g);
        }
    for (const auto& tr : right_hull_trace(d, t))
        for (const auto& s : tr.samples) out.rightHull.push_back(s.z);
    return out;
}

PropertyReport verify_property(HullProperty p, const Driver& d, const PropertyParams& pp) {
    PropertyReport rep;
    rep.property = p;
    rep.tol = pp.tol;
    rep.c = d.c;
    rep.params = pp;
    ZipperOptions zo;

    switch (p) {
    case HullProperty::Translation: {
        auto lhs = zipper_trace(translate(d, pp.shiftBy), pp.zipperN, zo);
        auto rhs = reference_trace(d, pp.perDecade);
        for (auto& tr : rhs)
            for (auto& s : tr.samples) s.z += pp.shiftBy;
        rep.hausdorff = chains_distance(chains_of(lhs), chains_of(rhs));
        rep.detail = "zipper of the translated driver vs translated implicit trace";
        break;
    }
    case HullProperty::Scaling: {
        // the zipper's geometric error grows with the hull size, so the
        // enlarged copy gets proportionally more steps
        const int n = static_cast<int>(std::ceil(pp.zipperN * std::max(1.0, pp.a)));
        auto lhs = zipper_trace(rescale(d, pp.a), n, zo);
        auto rhs = reference_trace(d, pp.perDecade);
        for (auto& tr : rhs)
            for (auto& s : tr.samples) s.z *= pp.a;
        rep.hausdorff = chains_distance(chains_of(lhs), chains_of(rhs));
        rep.detail = "zipper of the rescaled driver vs a * implicit trace";
        break;
    }
    case HullProperty::Reflection: {
        auto lhs = zipper_trace(reflect(d, pp.axis), pp.zipperN, zo);
        auto rhs = reference_trace(d, pp.perDecade);
        const auto mirror = [&](cplx z) {
            switch (pp.axis) {
            case ReflectAxis::RealAxis: return std::conj(z);
            case ReflectAxis::ImagAxis: return -std::conj(z);
            case ReflectAxis::Both: return -z;
            }
            return z;
        };
        for (auto& tr : rhs)
            for (auto& s : tr.samples) s.z = mirror(s.z);
        rep.hausdorff = chains_distance(chains_of(lhs), chains_of(rhs));
        rep.detail = "zipper of the reflected driver vs reflected implicit trace";
        break;
    }
    case HullProperty::Duality: {
        auto lhs = right_hull_trace(d, d.T, pp.perDecade);
        // the dual driver runs to its full horizon, where uniform zipper
        // steps are coarsest; double the count to compensate
        auto rhs = zipper_trace(dual(d), 2 * pp.zipperN, zo);
        rotate_traces(rhs, cplx(0.0, 1.0));
        rep.hausdorff = chains_distance(chains_of(lhs), chains_of(rhs));
        rep.detail = "implicit right hull vs zipper of the dual driver rotated by i";
        break;
    }
    case HullProperty::Concatenation: {
        const double t = pp.t, s = pp.s;
        if (!(t > 0.0) || !(s > 0.0) || t + s > d.T + 1e-12)
            fail(Status::BadArgument, "concatenation needs t, s > 0 with t + s <= T");
        const auto rt = chains_of(right_hull_trace(d, t, pp.perDecade));
        // Both arcs of the comparison emanate from the junction lambda(t),
        // which lies on R_t; trimming the overlapTrim disk around R_t from
        // both sides keeps the comparison away from the ill-conditioned
        // junction.  Sample times cluster toward t, where the flowed
        // images bunch up near the junction.
        const Driver dw = with_horizon(d, t + s);
        auto wg = default_grid(dw, pp.perDecade);
        refine_grid_near(wg, t, s, pp.perDecade);
        const auto whole = reference_trace(dw, wg);
        std::vector<std::vector<cplx>> lhs;
        for (const auto& tr : whole) {
            std::vector<cplx> chain;
            for (const auto& smp : tr.samples) {
                if (smp.t <= t) continue;
                const FlowResult r = flow_point(smp.z, d, t);
                if (r.status != PointStatus::Alive) continue; // grazed the boundary
                if (dist_to_chains(r.g, rt) > pp.overlapTrim) chain.push_back(r.g);
            }
            lhs.push_back(std::move(chain));
        }
        // right side: the shifted driver's hull minus its overlap with R_t
        const Driver ds = with_horizon(shift(d, t), s);
        const auto shifted = reference_trace(ds, pp.perDecade);
        std::vector<std::vector<cplx>> rhs;
        for (const auto& tr : shifted) {
            std::vector<cplx> chain;
            for (const auto& smp : tr.samples)
                if (dist_to_chains(smp.z, rt) > pp.overlapTrim) chain.push_back(smp.z);
            rhs.push_back(std::move(chain));
        }
        rep.hausdorff = chains_distance(lhs, rhs);
        rep.detail = "flowed hull survivors vs shifted-driver trace minus the right hull";
        break;
    }
    }
    rep.passed = rep.hausdorff <= pp.tol;
    return rep;
}

SpiralDiagnostics spiral_diagnostics(const HullTrace& trace, cplx center) {
    if (trace.samples.empty()) fail(Status::BadArgument, "spiral diagnostics needs samples");
    SpiralDiagnostics out;
    out.center = center;
    out.unwoundArg.reserve(trace.samples.size());
    double prev = 0.0;
    for (size_t i = 0; i < trace.samples.size(); ++i) {
        double a = std::arg(trace.samples[i].z - center);
        if (i > 0) a += 2.0 * kPi * std::round((prev - a) / (2.0 * kPi));
        out.unwoundArg.push_back(a);
        prev = a;
    }
    out.winding = (out.unwoundArg.back() - out.unwoundArg.front()) / (2.0 * kPi);
    return out;
}

} // namespace loewner
