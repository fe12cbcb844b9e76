#include "core/params.hpp"

#include <algorithm>
#include <cmath>

namespace loewner {

namespace {

constexpr double kPi = 3.14159265358979323846;

double re_alpha_folded(cplx c) {
    QuadrantFold fold = fold_first_quadrant(c);
    cplx cf = fold.apply(c);
    cplx s = principal_sqrt(cf * cf - 16.0);
    return 0.5 * (1.0 - (cf / s)).real();
}

} // namespace

QuadrantFold fold_first_quadrant(cplx c) {
    QuadrantFold f;
    f.flipRe = c.real() < 0.0;
    f.flipIm = c.imag() < 0.0;
    return f;
}

Family1Params family1_params(cplx c, double tol) {
    if (std::abs(c - 4.0) <= tol || std::abs(c + 4.0) <= tol)
        fail(Status::DegenerateC, "family-1 parameters are singular at c = +-4");
    Family1Params p;
    p.c = c;
    p.sqrtDisc = principal_sqrt(c * c - 16.0);
    p.A = 0.5 * (c + p.sqrtDisc);
    p.B = 0.5 * (c - p.sqrtDisc);
    p.alpha = 0.5 * (1.0 - c / p.sqrtDisc);
    p.beta = 1.0 - p.alpha;
    return p;
}

Family2Params family2_params(cplx c, double tau, double tol) {
    if (std::abs(c - cplx(0, 4)) <= tol || std::abs(c + cplx(0, 4)) <= tol)
        fail(Status::DegenerateC, "family-2 parameters are singular at c = +-4i");
    if (tau < 0.0) fail(Status::BadArgument, "tau must be non-negative");
    Family2Params p;
    p.c = c;
    p.tau = tau;
    p.sqrtDisc = principal_sqrt(c * c + 16.0);
    p.D = 0.5 * (c + p.sqrtDisc);
    p.E = 0.5 * (c - p.sqrtDisc);
    p.delta = 0.5 * (1.0 - c / p.sqrtDisc);
    p.epsilon = 1.0 - p.delta;
    return p;
}

Phase classify_phase(cplx c, double phaseTol) {
    QuadrantFold fold = fold_first_quadrant(c);
    Family1Params p = family1_params(fold.apply(c));
    Phase ph;
    ph.alpha = p.alpha;
    ph.imAlpha = p.alpha.imag();
    double re = p.alpha.real();
    if (std::abs(re) <= phaseTol) {
        ph.kind = PhaseKind::Transitional;
        ph.criticalTime = 1.0 - std::exp(-4.0 * kPi * ph.imAlpha);
    } else {
        ph.kind = re > 0.0 ? PhaseKind::PositiveReAlpha : PhaseKind::NegativeReAlpha;
    }
    return ph;
}

std::optional<BoundaryPoint> boundary_on_ray(double theta, const BoundaryOptions& opt) {
    if (theta <= 0.0 || theta >= 0.5 * kPi) return std::nullopt;
    auto f = [&](double r) { return re_alpha_folded(std::polar(r, theta)); };

    // Bracket a sign change.  Re(alpha) -> 1/2 as r -> 0 and behaves like
    // -4 cos(2 theta)/r^2 at infinity, so a single crossing is expected
    // for theta < pi/4.  Near c = 4 the function is steep; a fine scan
    // with geometric spacing finds the bracket reliably.
    const int scan = 400;
    double lo = opt.rMin, hi = opt.rMax;
    double prevR = lo, prevV = f(lo);
    double bracketLo = 0.0, bracketHi = 0.0;
    bool found = false;
    double ratio = std::pow(hi / lo, 1.0 / scan);
    double r = lo;
    for (int i = 1; i <= scan; ++i) {
        r *= ratio;
        double v = f(r);
        if (std::isfinite(v) && std::isfinite(prevV) && (prevV > 0.0) != (v > 0.0)) {
            bracketLo = prevR;
            bracketHi = r;
            found = true;
            break;
        }
        prevR = r;
        prevV = v;
    }
    if (!found) return std::nullopt;

    double a = bracketLo, b = bracketHi;
    double fa = f(a);
    for (int it = 0; it < 200 && (b - a) > 1e-15 * b; ++it) {
        double m = 0.5 * (a + b);
        double fm = f(m);
        if ((fa > 0.0) == (fm > 0.0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
        if (std::abs(fm) <= opt.residualTol && (b - a) <= 1e-12 * b) break;
    }
    double root = 0.5 * (a + b);
    BoundaryPoint bp;
    bp.theta = theta;
    bp.r = root;
    bp.c = std::polar(root, theta);
    bp.residual = std::abs(f(root));
    bp.imAlpha = family1_params(fold_first_quadrant(bp.c).apply(bp.c)).alpha.imag();
    return bp;
}

BoundarySweep phase_boundary(const BoundaryOptions& opt) {
    if (opt.rays < 8) fail(Status::BadArgument, "phase boundary sweep needs at least 8 rays");
    BoundarySweep sweep;
    sweep.raysTried = opt.rays;
    for (int i = 1; i <= opt.rays; ++i) {
        double theta = 0.5 * kPi * i / (opt.rays + 1);
        auto bp = boundary_on_ray(theta, opt);
        if (bp)
            sweep.points.push_back(*bp);
        else
            ++sweep.raysSkipped;
    }
    if (sweep.points.empty()) fail(Status::NoRootOnRay, "no boundary crossing found on any ray");

    auto best = std::min_element(sweep.points.begin(), sweep.points.end(),
                                 [](const BoundaryPoint& x, const BoundaryPoint& y) { return x.r < y.r; });
    // Refine the minimal radius over theta with golden-section around the
    // best ray; r(theta) is smooth there so a local 1-d minimisation on
    // the polished radius function converges fast.
    auto radius = [&](double th) {
        auto bp = boundary_on_ray(th, opt);
        return bp ? bp->r : 1e300;
    };
    size_t bi = static_cast<size_t>(best - sweep.points.begin());
    double thLo = bi > 0 ? sweep.points[bi - 1].theta : best->theta * 0.5;
    double thHi = bi + 1 < sweep.points.size() ? sweep.points[bi + 1].theta : best->theta * 1.5;
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = thHi - gr * (thHi - thLo), x2 = thLo + gr * (thHi - thLo);
    double f1 = radius(x1), f2 = radius(x2);
    for (int it = 0; it < 60 && (thHi - thLo) > 1e-10; ++it) {
        if (f1 < f2) {
            thHi = x2;
            x2 = x1;
            f2 = f1;
            x1 = thHi - gr * (thHi - thLo);
            f1 = radius(x1);
        } else {
            thLo = x1;
            x1 = x2;
            f1 = f2;
            x2 = thLo + gr * (thHi - thLo);
            f2 = radius(x2);
        }
    }
    double thBest = 0.5 * (thLo + thHi);
    auto bp = boundary_on_ray(thBest, opt);
    if (bp && bp->r < best->r) {
        sweep.minAbs = bp->r;
        sweep.minPoint = bp->c;
    } else {
        sweep.minAbs = best->r;
        sweep.minPoint = best->c;
    }
    return sweep;
}

} // namespace loewner
