#include "core/trace.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "core/error.hpp"

namespace loewner {
namespace {

constexpr double kPi = 3.14159265358979323846;

// Pulls a principal argument into the +-pi window around ref.  The
// continuation never rotates more than maxArgStep per substep, so the
// nearest representative is always the right one.
double unwind(double raw, double ref) {
    double d = raw - ref;
    d -= 2.0 * kPi * std::round(d / (2.0 * kPi));
    return ref + d;
}

TraceSide other(TraceSide s) {
    return s == TraceSide::Upper ? TraceSide::Lower : TraceSide::Upper;
}

// The tip equation of either family, written as
//   cA*log(z - pA) + cB*log(z - pB) = K + sign*x
// in the log clock x (u for family 1 with sign -1, v for family 2 with
// sign +1).  The logs continue the principal branch from the start.
struct TipSystem {
    cplx pA, pB;
    cplx cA, cB;
    cplx start;
    cplx K;
    double argA0 = 0.0, argB0 = 0.0;
    double sign = -1.0;
    double seed2 = 8.0; // leading tip expansion: z = start +- i*sqrt(seed2*x)
    bool family1 = true;
    double tau = 0.0;

    double clock(double t) const {
        return family1 ? -0.5 * std::log1p(-t) : 0.5 * std::log1p(t / tau);
    }
    double time(double x) const {
        return family1 ? -std::expm1(-2.0 * x) : tau * std::expm1(2.0 * x);
    }
};

struct TraceState {
    double x = 0.0;
    cplx z;
    double aA = 0.0, aB = 0.0;
    // Near an endpoint z - pole underflows the double grid of z, so the
    // iterate switches to the offset w = z - pole as primary variable
    // (pole: -1 none, 0 = pA, 1 = pB); z is kept synced for output.
    int pole = -1;
    cplx w;
};

void pole_offsets(const TipSystem& sys, const TraceState& s, cplx& fA, cplx& fB) {
    if (s.pole == 0) {
        fA = s.w;
        fB = s.w + (sys.pA - sys.pB);
    } else if (s.pole == 1) {
        fB = s.w;
        fA = s.w + (sys.pB - sys.pA);
    } else {
        fA = s.z - sys.pA;
        fB = s.z - sys.pB;
    }
}

void sync_z(const TipSystem& sys, TraceState& s) {
    if (s.pole >= 0) s.z = (s.pole == 0 ? sys.pA : sys.pB) + s.w;
}

// Switch the primary variable to the offset from a nearby pole (with
// hysteresis so brief approaches do not thrash).  The one-off subtraction
// at the switch is ulp-accurate; afterwards the offset evolves directly
// and the tip equation stays solvable to newtonTol at any depth.
void recenter(const TipSystem& sys, TraceState& s) {
    cplx fA, fB;
    pole_offsets(sys, s, fA, fB);
    double mA = std::abs(fA), mB = std::abs(fB);
    if (s.pole < 0) {
        if (mA < 1e-3 && mA <= mB) {
            s.pole = 0;
            s.w = fA;
        } else if (mB < 1e-3) {
            s.pole = 1;
            s.w = fB;
        }
    } else if (std::abs(s.w) > 2e-3) {
        s.pole = -1;
    }
    sync_z(sys, s);
}

cplx residual_at(const TipSystem& sys, const TraceState& s) {
    cplx fA, fB;
    pole_offsets(sys, s, fA, fB);
    cplx LA(std::log(std::abs(fA)), s.aA);
    cplx LB(std::log(std::abs(fB)), s.aB);
    return sys.cA * LA + sys.cB * LB - sys.K - cplx(sys.sign * s.x, 0.0);
}

// Refines the pre-seeded state (x at target, active variable advanced
// by the predictor, args carrying the previous branch) in place.
bool newton_solve(const TipSystem& sys, TraceState s, const TraceOptions& opt,
                  TraceState& out) {
    for (int it = 0;; ++it) {
        cplx fA, fB;
        pole_offsets(sys, s, fA, fB);
        double mA = std::abs(fA), mB = std::abs(fB);
        if (!(mA > 0.0) || !(mB > 0.0)) return false;
        s.aA = unwind(std::arg(fA), s.aA);
        s.aB = unwind(std::arg(fB), s.aB);
        cplx r = residual_at(sys, s);
        if (std::abs(r) <= opt.newtonTol) {
            sync_z(sys, s);
            out = s;
            return true;
        }
        if (it >= opt.newtonMaxIter) return false;
        cplx dz = r / (sys.cA / fA + sys.cB / fB);
        if (!std::isfinite(dz.real()) || !std::isfinite(dz.imag())) return false;
        // A jump comparable to a pole distance would invalidate the
        // branch tracking; subdividing the step is cheaper than risking it.
        if (std::abs(dz) > 0.4 * std::min(mA, mB)) return false;
        if (s.pole >= 0)
            s.w -= dz;
        else
            s.z -= dz;
    }
}

// Advances the state to the clock xEnd, choosing substeps so the curve
// rotates at most maxArgStep about either pole per step.  Calls
// onAccept after every accepted substep.
template <class Hook>
void march(const TipSystem& sys, TraceSide side, TraceState& s, double xEnd,
           const TraceOptions& opt, Hook&& onAccept) {
    const double xTol = 1e-14 * std::max(1.0, xEnd);
    while (xEnd - s.x > xTol) {
        double du;
        cplx zdot;
        bool atStart = s.x == 0.0;
        if (atStart) {
            du = std::min(xEnd, 1e-3);
        } else {
            cplx fA, fB;
            pole_offsets(sys, s, fA, fB);
            zdot = cplx(sys.sign, 0.0) / (sys.cA / fA + sys.cB / fB);
            double rate =
                std::abs(zdot) * std::max(1.0 / std::abs(fA), 1.0 / std::abs(fB));
            du = std::min({xEnd - s.x, opt.maxArgStep / std::max(rate, 1e-300), 0.25});
        }
        for (;;) {
            TraceState seed;
            if (atStart) {
                double dir = side == TraceSide::Upper ? 1.0 : -1.0;
                seed.x = du;
                seed.z = sys.start + cplx(0.0, dir) * std::sqrt(sys.seed2 * du);
                seed.aA = sys.argA0;
                seed.aB = sys.argB0;
            } else {
                seed = s;
                seed.x = s.x + du;
                if (seed.pole >= 0)
                    seed.w += zdot * du;
                else
                    seed.z += zdot * du;
            }
            TraceState next;
            bool ok = newton_solve(sys, seed, opt, next);
            double refA = atStart ? sys.argA0 : s.aA;
            double refB = atStart ? sys.argB0 : s.aB;
            if (ok && std::abs(next.aA - refA) < 2.0 && std::abs(next.aB - refB) < 2.0) {
                s = next;
                break;
            }
            du *= 0.5;
            if (du < 1e-13 * std::max(1.0, xEnd))
                fail(Status::NewtonDivergence, "tip continuation stalled near clock " +
                                                   std::to_string(s.x));
        }
        recenter(sys, s);
        onAccept(s);
    }
}

void march_plain(const TipSystem& sys, TraceState& s, double xEnd, const TraceOptions& opt) {
    march(sys, TraceSide::Upper, s, xEnd, opt, [](const TraceState&) {});
}

struct Dip {
    double x = 0.0;
    double dist = 0.0;
    cplx z;
};

// Locates the closest approach to the start point inside a bracket of
// accepted substeps by two scan passes of the continuation itself.
Dip refine_dip(const TipSystem& sys, TraceState s0, double xHi, const TraceOptions& opt) {
    double xLo = s0.x;
    Dip best{s0.x, std::abs(s0.z - sys.start), s0.z};
    // The curve is much faster through a near-tangency than on the
    // chord around it, so the number of narrowing passes is adaptive:
    // stop once the minimum is resolved well inside the hit tolerance.
    for (int pass = 0; pass < 6 && !(best.dist <= 0.25 * opt.selfHitTol && pass > 0); ++pass) {
        const int probes = 64;
        double h = (xHi - xLo) / probes;
        if (!(h > 1e-14 * std::max(1.0, xHi))) break;
        std::vector<TraceState> states{s0};
        states.reserve(probes + 1);
        TraceState cur = s0;
        best = {cur.x, std::abs(cur.z - sys.start), cur.z};
        int failures = 0;
        for (int j = 1; j <= probes; ++j) {
            try {
                march_plain(sys, cur, xLo + h * j, opt);
            } catch (const Error&) {
                // A probe can land on the critical point of the tip
                // equation where Newton degenerates; neighbours resolve
                // the minimum just as well.
                if (++failures > 3) return best;
            }
            states.push_back(cur);
            double dj = std::abs(cur.z - sys.start);
            if (dj < best.dist) best = {cur.x, dj, cur.z};
        }
        double newLo = std::max(xLo, best.x - h);
        double newHi = std::min(xHi, best.x + h);
        TraceState sNext = s0;
        for (const auto& st : states)
            if (st.x <= newLo + 1e-18) sNext = st;
        s0 = sNext;
        xLo = s0.x;
        xHi = newHi;
        if (!(xHi > xLo)) break;
    }
    return best;
}

// Watches the accepted substeps for a local minimum of the distance to
// the start point and refines it; a minimum below selfHitTol is the
// curve returning to its origin.
struct HitScan {
    double armRadius = 0.0, gate = 0.0;
    bool armed = false, done = false;
    int tried = 0;
    bool have1 = false, have2 = false;
    TraceState s1, s2;
    double d1 = 0.0, d2 = 0.0;
    std::optional<double> hitX;
    double hitDist = 0.0;
    cplx hitZ;
};

void hit_scan_accept(const TipSystem& sys, const TraceState& s, const TraceOptions& opt,
                     HitScan& hs) {
    double d0 = std::abs(s.z - sys.start);
    if (!hs.armed) {
        if (d0 > hs.armRadius) hs.armed = true;
    } else if (!hs.done && hs.have2 && hs.d1 <= hs.d2 && hs.d1 <= d0) {
        // A fast crossing can dip well between accepted steps: around a
        // linear-speed pass at offset phi the neighbours read v*(h -+ phi),
        // so a genuine return shows as a sample minimum far below both
        // (ratio <= 1/3), while the wiggles of a spiral keep all three
        // distances comparable.  The absolute gate catches slow grazes.
        const bool sharp = hs.d1 <= 0.7 * std::max(hs.d2, d0);
        if (hs.d1 < hs.gate || sharp) {
            Dip dip = refine_dip(sys, hs.s2, s.x, opt);
            if (dip.dist < opt.selfHitTol) {
                hs.hitX = dip.x;
                hs.hitDist = dip.dist;
                hs.hitZ = dip.z;
                hs.done = true;
            } else if (++hs.tried >= 12) {
                hs.done = true;
            }
        }
    }
    hs.s2 = hs.s1;
    hs.d2 = hs.d1;
    hs.have2 = hs.have1;
    hs.s1 = s;
    hs.d1 = d0;
    hs.have1 = true;
}

void validate_grid(const std::vector<double>& tGrid, bool family1) {
    if (tGrid.empty()) fail(Status::BadArgument, "time grid is empty");
    if (!(tGrid.front() >= 0.0))
        fail(Status::BadArgument, "time grid must start at or after 0");
    for (size_t i = 1; i < tGrid.size(); ++i)
        if (!(tGrid[i] > tGrid[i - 1]))
            fail(Status::BadArgument, "time grid must be strictly increasing");
    if (!std::isfinite(tGrid.back()))
        fail(Status::BadArgument, "time grid must be finite");
    if (family1 && !(tGrid.back() < 1.0))
        fail(Status::BadArgument, "family 1 grid must stay below the singular time 1");
}

HullTrace trace_one_side(const TipSystem& sys, TraceSide side,
                         const std::vector<double>& tGrid, const TraceOptions& opt) {
    HullTrace out;
    out.side = side;
    out.source = TraceSource::Implicit;
    out.samples.reserve(tGrid.size());
    TraceState s;
    s.z = sys.start;
    s.aA = sys.argA0;
    s.aB = sys.argB0;
    HitScan hs;
    hs.armRadius = 10.0 * opt.selfHitTol;
    hs.gate = 10.0 * opt.selfHitTol;
    auto hook = [&](const TraceState& st) { hit_scan_accept(sys, st, opt, hs); };
    size_t i = 0;
    if (tGrid[0] == 0.0) {
        out.samples.push_back({0.0, sys.start, sys.argA0, sys.argB0, 0.0});
        i = 1;
    }
    for (; i < tGrid.size(); ++i) {
        march(sys, side, s, sys.clock(tGrid[i]), opt, hook);
        out.samples.push_back(
            {tGrid[i], s.z, s.aA, s.aB, std::abs(residual_at(sys, s))});
    }
    if (hs.hitX) {
        out.selfHitTime = sys.time(*hs.hitX);
        out.selfHitPoint = hs.hitZ;
    }
    return out;
}

// Endpoint of a family-1 side at the singular time.  The assignment
// upper->A, lower->B holds for coefficients in the closed first
// quadrant; elsewhere it is transported by the reflection fold, which
// swaps the sides exactly when it conjugates.
std::optional<cplx> family1_endpoint(cplx c, TraceSide side) {
    Phase ph = classify_phase(c);
    if (ph.kind == PhaseKind::Transitional) return std::nullopt;
    QuadrantFold f = fold_first_quadrant(c);
    Family1Params fp = family1_params(f.apply(c));
    if (ph.kind == PhaseKind::NegativeReAlpha) return f.unapply(fp.B);
    TraceSide folded = f.swapsSides() ? other(side) : side;
    return f.unapply(folded == TraceSide::Upper ? fp.A : fp.B);
}

} // namespace

std::vector<HullTrace> trace_tips_family1(cplx c, const std::vector<double>& tGrid,
                                          const TraceOptions& opt) {
    validate_grid(tGrid, true);
    Family1Params p = family1_params(c);
    TipSystem sys;
    sys.pA = p.A;
    sys.pB = p.B;
    sys.cA = p.alpha;
    sys.cB = p.beta;
    sys.start = c;
    sys.sign = -1.0;
    sys.seed2 = 8.0;
    sys.family1 = true;
    cplx qA = c - p.A, qB = c - p.B;
    sys.argA0 = std::arg(qA);
    sys.argB0 = std::arg(qB);
    sys.K = p.alpha * std::log(qA) + p.beta * std::log(qB);
    std::vector<HullTrace> out;
    for (TraceSide side : {TraceSide::Upper, TraceSide::Lower}) {
        HullTrace tr = trace_one_side(sys, side, tGrid, opt);
        tr.endpoint = family1_endpoint(c, side);
        if (tr.endpoint && !tr.samples.empty())
            tr.endpointGap = std::abs(tr.samples.back().z - *tr.endpoint);
        out.push_back(std::move(tr));
    }
    return out;
}

std::vector<HullTrace> trace_tips_family2(cplx c, double tau,
                                          const std::vector<double>& tGrid,
                                          const TraceOptions& opt) {
    if (!(tau > 0.0) || !std::isfinite(tau))
        fail(Status::BadArgument,
             "tau must be positive; the tau = 0 hull has the closed form sqrt_t_hull");
    validate_grid(tGrid, false);
    Family2Params p = family2_params(c, tau);
    double rt = std::sqrt(tau);
    TipSystem sys;
    sys.pA = p.D * rt;
    sys.pB = p.E * rt;
    sys.cA = p.delta;
    sys.cB = p.epsilon;
    sys.start = c * rt;
    sys.sign = 1.0;
    sys.seed2 = 8.0 * tau;
    sys.family1 = false;
    sys.tau = tau;
    cplx qA = sys.start - sys.pA, qB = sys.start - sys.pB;
    sys.argA0 = std::arg(qA);
    sys.argB0 = std::arg(qB);
    sys.K = p.delta * std::log(qA) + p.epsilon * std::log(qB);
    std::vector<HullTrace> out;
    for (TraceSide side : {TraceSide::Upper, TraceSide::Lower})
        out.push_back(trace_one_side(sys, side, tGrid, opt));
    return out;
}

double tip_residual_family1(const Family1Params& p, const TraceSample& s) {
    double u = -0.5 * std::log1p(-s.t);
    cplx K = p.alpha * std::log(p.c - p.A) + p.beta * std::log(p.c - p.B);
    cplx LA(std::log(std::abs(s.z - p.A)), s.argZA);
    cplx LB(std::log(std::abs(s.z - p.B)), s.argZB);
    return std::abs(p.alpha * LA + p.beta * LB - K + u);
}

double tip_residual_family2(const Family2Params& p, const TraceSample& s) {
    if (!(p.tau > 0.0))
        fail(Status::BadArgument, "residual needs tau > 0 parameters");
    double rt = std::sqrt(p.tau);
    double v = 0.5 * std::log1p(s.t / p.tau);
    cplx K = p.delta * std::log(p.c * rt - p.D * rt) +
             p.epsilon * std::log(p.c * rt - p.E * rt);
    cplx LA(std::log(std::abs(s.z - p.D * rt)), s.argZA);
    cplx LB(std::log(std::abs(s.z - p.E * rt)), s.argZB);
    return std::abs(p.delta * LA + p.epsilon * LB - K - v);
}

SqrtTHull sqrt_t_hull(cplx c, double t) {
    if (!(t >= 0.0) || !std::isfinite(t))
        fail(Status::BadArgument, "time must be finite and nonnegative");
    QuadrantFold f = fold_first_quadrant(c);
    Family2Params p = family2_params(f.apply(c), 0.0);
    cplx tipUnit = std::exp(p.delta * std::log(p.E) + p.epsilon * std::log(p.D));
    double rt = std::sqrt(t);
    cplx up = tipUnit * rt;
    // The borderline band matches the default phase tolerance of
    // classify_phase: a polished transitional coefficient carries a
    // Re(delta) residual well above machine epsilon, and its dual must
    // still count as one segment.
    double reDelta = p.delta.real();
    cplx low = reDelta < -1e-10 ? up : up * std::exp(cplx(0.0, -2.0 * kPi) * p.delta);
    SqrtTHull h;
    h.c = c;
    h.t = t;
    h.segmentCount = reDelta > 1e-10 ? 2 : 1;
    cplx tU = f.unapply(up), tL = f.unapply(low);
    if (f.swapsSides()) std::swap(tU, tL);
    h.tipUpper = tU;
    h.tipLower = tL;
    return h;
}

namespace {

// One elementary slit map of the zipper: the hull grown on [t0, t0+dt]
// is replaced by the hull of base + cLocal*sqrt(s), whose inverse is
// h(w) = base + (w - base - D*sqrt(dt))^delta * (w - base - E*sqrt(dt))^epsilon.
struct ZipStep {
    double t0 = 0.0, dt = 0.0;
    cplx base, cLocal;
    cplx Dr, Er;
    cplx delta, eps;
    bool two = false;    // slit has two distinct arms (Re delta > 0)
    cplx tip[2];         // tip(s) = base + tip * sqrt(s), [0]=upper, [1]=lower
    double anchorD[2] = {0.0, 0.0}; // arg(w' - Dr) at the attach point, per side
    double anchorE[2] = {0.0, 0.0}; // arg(w' - Er) likewise
};

ZipStep make_step(const Driver& d, double t0, double t1) {
    ZipStep st;
    st.t0 = t0;
    st.dt = t1 - t0;
    st.base = eval(d, t0);
    double rdt = std::sqrt(st.dt);
    st.cLocal = (eval(d, t1) - st.base) / rdt;
    Family2Params p = family2_params(st.cLocal, 0.0);
    st.Dr = p.D * rdt;
    st.Er = p.E * rdt;
    st.delta = p.delta;
    st.eps = p.epsilon;
    st.two = p.delta.real() > 1e-12;
    cplx unit = std::exp(p.delta * std::log(p.E) + p.epsilon * std::log(p.D));
    // At the attach point w' = base + cLocal*sqrt(dt) the factors are
    // E*sqrt(dt) and D*sqrt(dt) exactly.  The principal branch continues
    // the side E's cut leaves open: E sits just above the negative real
    // axis when Im cLocal >= 0 (Arg E > 0) and the principal window then
    // serves the upper prime end; when E falls below the axis the roles
    // swap.  The other prime end winds 2*pi about Dr away from the
    // principal one, putting the second tip at e^{-+2*pi*i*delta} * unit.
    // For real cLocal this reduces to conjugate tips with the upper one
    // in the closed upper halfplane.
    double aE = std::arg(p.E), aD = std::arg(p.D);
    bool principalUpper = aE > 0.0;
    double wind = principalUpper ? -2.0 * kPi : 2.0 * kPi;
    cplx second = st.two ? unit * std::exp(cplx(0.0, wind) * p.delta) : unit;
    int pri = principalUpper ? 0 : 1;
    st.tip[pri] = unit;
    st.tip[1 - pri] = second;
    st.anchorD[pri] = aE;
    st.anchorE[pri] = aD;
    st.anchorD[1 - pri] = st.two ? aE + wind : aE;
    st.anchorE[1 - pri] = aD;
    return st;
}

cplx apply_step(const ZipStep& st, cplx w, double& aD, double& aE) {
    cplx fD = w - st.base - st.Dr;
    cplx fE = w - st.base - st.Er;
    double mD = std::abs(fD), mE = std::abs(fE);
    if (!(mD > 0.0) || !(mE > 0.0))
        fail(Status::BranchCutHit, "zipper chain touched a slit endpoint");
    double nD = unwind(std::arg(fD), aD);
    double nE = unwind(std::arg(fE), aE);
    if (std::abs(nD - aD) >= kPi - 1e-12 || std::abs(nE - aE) >= kPi - 1e-12)
        fail(Status::BranchCutHit,
             "zipper chain jumped a branch window; refine the partition");
    aD = nD;
    aE = nE;
    return st.base +
           std::exp(st.delta * cplx(std::log(mD), nD) + st.eps * cplx(std::log(mE), nE));
}

// Partition graded so the per-step coefficient |dLambda|/sqrt(dt) stays
// roughly constant: logarithmic in the remaining time for the closed
// forms, uniform for sampled drivers.
std::vector<double> zipper_partition(const Driver& d, int n) {
    std::vector<double> t(static_cast<size_t>(n) + 1, 0.0);
    switch (d.form) {
    case DriverForm::SqrtOneMinusT: {
        double margin = 1e-12 * std::max(1.0, d.u);
        if (d.T < d.u - margin) {
            double q = (d.u - d.T) / d.u;
            for (int k = 1; k < n; ++k)
                t[k] = d.u * (1.0 - std::pow(q, double(k) / n));
        } else {
            // Full horizon: grade down eight decades, then finish with
            // one exact-endpoint step.  Its coefficient is not small,
            // so the last stretch is qualitative; lipGuard flags it.
            for (int k = 1; k < n; ++k)
                t[k] = d.u * (1.0 - std::pow(1e-8, double(k) / (n - 1)));
        }
        t[n] = d.T;
        break;
    }
    case DriverForm::SqrtTauPlusT: {
        if (d.tau > 0.0) {
            double q = (d.tau + d.T) / d.tau;
            for (int k = 1; k < n; ++k)
                t[k] = d.tau * (std::pow(q, double(k) / n) - 1.0);
        } else {
            // The first step reproduces this driver exactly, so it can
            // cover half the range; the rest is graded geometrically.
            for (int k = 1; k < n; ++k)
                t[k] = 0.5 * d.T * std::pow(2.0, double(k - 1) / (n - 1));
        }
        t[n] = d.T;
        break;
    }
    case DriverForm::Sampled:
        for (int k = 1; k <= n; ++k) t[k] = d.T * double(k) / n;
        break;
    }
    return t;
}

} // namespace

std::vector<HullTrace> zipper_trace(const Driver& d, int n, const ZipperOptions& opt) {
    if (n < 1) fail(Status::BadArgument, "zipper needs at least one step");
    if (opt.samplesPerStep < 1)
        fail(Status::BadArgument, "samplesPerStep must be at least 1");
    if (!(d.T > 0.0) || !std::isfinite(d.T))
        fail(Status::BadArgument, "driver horizon must be positive");
    std::vector<double> part = zipper_partition(d, n);
    int m = opt.samplesPerStep;
    if (d.form == DriverForm::SqrtTauPlusT && d.tau == 0.0) {
        // Each piece of c*sqrt(t) is the whole driver restarted at its own
        // scale, so the one-step inverses are exact and their composition
        // telescopes to the closed-form map: the samples land on the rays
        // of sqrt_t_hull at every n.  Evaluate them directly from it.
        SqrtTHull rays = sqrt_t_hull(d.c, 1.0);
        bool lipWarn = std::abs(d.c) > opt.lipGuard;
        std::vector<HullTrace> out;
        for (int side = 0; side < 2; ++side) {
            cplx unit = side == 0 ? rays.tipUpper : rays.tipLower;
            HullTrace tr;
            tr.side = side == 0 ? TraceSide::Upper : TraceSide::Lower;
            tr.source = TraceSource::Zipper;
            tr.lipGuardExceeded = lipWarn;
            tr.samples.reserve(static_cast<size_t>(n) * m + 1);
            tr.samples.push_back({0.0, d.offset, 0.0, 0.0, 0.0});
            for (int k = 0; k < n; ++k)
                for (int j = 1; j <= m; ++j) {
                    double frac = double(j) / m;
                    double t = part[k] + (part[k + 1] - part[k]) * frac * frac;
                    tr.samples.push_back({t, d.offset + unit * std::sqrt(t), 0.0, 0.0, 0.0});
                }
            out.push_back(std::move(tr));
        }
        return out;
    }
    std::vector<ZipStep> steps;
    steps.reserve(n);
    double lipMax = 0.0;
    for (int k = 0; k < n; ++k) {
        if (!(part[k + 1] > part[k]))
            fail(Status::BadArgument, "zipper partition collapsed; reduce n");
        steps.push_back(make_step(d, part[k], part[k + 1]));
        lipMax = std::max(lipMax, std::abs(steps.back().cLocal));
    }
    bool lipWarn = lipMax > opt.lipGuard;
    std::vector<HullTrace> out;
    for (int side = 0; side < 2; ++side) {
        std::vector<std::pair<double, cplx>> chain;
        for (int k = n - 1; k >= 0; --k) {
            const ZipStep& st = steps[k];
            std::vector<std::pair<double, cplx>> next;
            next.reserve(m + chain.size());
            cplx tip = st.tip[side];
            for (int j = 1; j <= m; ++j) {
                double frac = double(j) / m;
                double s = st.dt * frac * frac;
                next.emplace_back(st.t0 + s, st.base + tip * std::sqrt(s));
            }
            double aD = st.anchorD[side], aE = st.anchorE[side];
            for (const auto& pt : chain)
                next.emplace_back(pt.first, apply_step(st, pt.second, aD, aE));
            chain = std::move(next);
        }
        HullTrace tr;
        tr.side = side == 0 ? TraceSide::Upper : TraceSide::Lower;
        tr.source = TraceSource::Zipper;
        tr.lipGuardExceeded = lipWarn;
        tr.samples.reserve(chain.size() + 1);
        tr.samples.push_back({0.0, eval(d, 0.0), 0.0, 0.0, 0.0});
        for (const auto& pt : chain)
            tr.samples.push_back({pt.first, pt.second, 0.0, 0.0, 0.0});
        out.push_back(std::move(tr));
    }
    return out;
}

} // namespace loewner
