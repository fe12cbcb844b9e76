#include "core/flow.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

namespace loewner {

namespace {

// The closed driver forms have square-root cusps (family 1 at t = u,
// family 2 with tau = 0 at t = 0) where RK4 in the t clock would need
// hopelessly small steps.  Each form therefore integrates in a clock xi
// in which the driver is analytic: t = xi*(2*sqrt(u) - xi) for family 1
// (so xi = sqrt(u) - sqrt(u - t)), t = xi*(2*sqrt(tau) + xi) for family
// 2, and t = xi unchanged for sampled drivers.  The field picks up the
// factor dt/dxi.  Step sizes, odeTol, minStep and maxStep all live in
// clock units.
struct Family1Clock {
    cplx c, offset;
    double sqrtU;
    double t(double xi) const { return xi * (2.0 * sqrtU - xi); }
    double dtdxi(double xi) const { return 2.0 * (sqrtU - xi); }
    cplx lam(double xi) const { return offset + c * (sqrtU - xi); }
};

struct Family2Clock {
    cplx c, offset;
    double sqrtTau;
    double t(double xi) const { return xi * (2.0 * sqrtTau + xi); }
    double dtdxi(double xi) const { return 2.0 * (sqrtTau + xi); }
    cplx lam(double xi) const { return offset + c * (sqrtTau + xi); }
};

struct SampledClock {
    const Driver* d;
    double t(double xi) const { return xi; }
    double dtdxi(double) const { return 1.0; }
    cplx lam(double xi) const { return eval(*d, xi); }
};

// One classical RK4 step of dg/dxi = 2*(dt/dxi)/(g - lambda(xi)); k1 is
// passed in so the doubled and halved trials can share the first stage.
template <class Clock>
cplx rk4_step(const Clock& ck, double xi, cplx g, double h, cplx k1) {
    double dMid = ck.dtdxi(xi + 0.5 * h);
    cplx lamMid = ck.lam(xi + 0.5 * h);
    cplx k2 = 2.0 * dMid / (g + 0.5 * h * k1 - lamMid);
    cplx k3 = 2.0 * dMid / (g + 0.5 * h * k2 - lamMid);
    cplx k4 = 2.0 * ck.dtdxi(xi + h) / (g + h * k3 - ck.lam(xi + h));
    return g + (h / 6.0) * (k1 + 2.0 * (k2 + k3) + k4);
}

template <class Clock>
void integrate(const Clock& ck, double xiEnd, const FlowOptions& opt, FlowResult& r) {
    double xi = 0.0;
    double h = opt.maxStep;
    while (xiEnd - xi > opt.minStep) {
        cplx w = r.g - ck.lam(xi);
        double dist = std::abs(w);
        if (dist <= opt.captureRadius) {
            r.status = PointStatus::Captured;
            r.t = ck.t(xi);
            return;
        }
        // dist^2/2 estimates the time to collision; convert it to the
        // integration clock before clamping the trial step.
        double dtd = ck.dtdxi(xi);
        double hMax = std::min(opt.maxStep, xiEnd - xi);
        if (dtd > 0.0) hMax = std::min(hMax, opt.stepSafety * dist * dist / (2.0 * dtd));
        h = std::min(h, hMax);
        if (h < opt.minStep) {
            r.status = PointStatus::Underflow;
            r.t = ck.t(xi);
            return;
        }

        cplx k1 = 2.0 * dtd / w;
        cplx big = rk4_step(ck, xi, r.g, h, k1);
        cplx mid = rk4_step(ck, xi, r.g, 0.5 * h, k1);
        cplx kMid = 2.0 * ck.dtdxi(xi + 0.5 * h) / (mid - ck.lam(xi + 0.5 * h));
        cplx fine = rk4_step(ck, xi + 0.5 * h, mid, 0.5 * h, kMid);
        double err = std::abs(fine - big) / 15.0;

        // The measured error cannot drop below the roundoff of the
        // state, so the budget gets a matching floor; without it tiny
        // clamped steps reject forever on floating-point noise.
        double budget = opt.odeTol * h + 2e-14 * (std::abs(r.g) + dist);
        if (std::isfinite(err) && err <= budget) {
            r.g = fine + (fine - big) / 15.0;
            xi += h;
            ++r.steps;
            if (opt.recordTrajectory) r.trajectory.emplace_back(ck.t(xi), r.g);
        }
        if (!std::isfinite(err)) {
            h *= 0.2;
        } else if (err == 0.0) {
            h *= 5.0;
        } else {
            h *= std::clamp(0.9 * std::pow(budget / err, 0.2), 0.2, 5.0);
        }
    }
    r.t = ck.t(xi);
    r.status = std::abs(r.g - ck.lam(xi)) <= opt.captureRadius ? PointStatus::Captured
                                                               : PointStatus::Alive;
}

} // namespace

FlowResult flow_point(cplx z, const Driver& d, double T, const FlowOptions& opt) {
    if (!(T >= 0.0)) fail(Status::BadArgument, "flow_point: negative final time");
    if (T > d.T * (1.0 + 1e-12)) fail(Status::OutOfDomain, "flow_point: final time past the driver horizon");
    T = std::min(T, d.T);

    // Full-horizon family-1 runs stop short of the singularity time;
    // survivors are classified afterwards by the shrinking-disk test.
    bool atHorizon = d.form == DriverForm::SqrtOneMinusT && T >= d.u - opt.time1Epsilon;
    double tStop = atHorizon ? d.u - opt.time1Epsilon : T;

    FlowResult r;
    r.g = z;
    if (opt.recordTrajectory) r.trajectory.emplace_back(0.0, z);

    switch (d.form) {
    case DriverForm::SqrtOneMinusT: {
        double sq = std::sqrt(d.u);
        integrate(Family1Clock{d.c, d.offset, sq}, sq - std::sqrt(d.u - tStop), opt, r);
        break;
    }
    case DriverForm::SqrtTauPlusT: {
        double sq = std::sqrt(d.tau);
        integrate(Family2Clock{d.c, d.offset, sq}, std::sqrt(d.tau + tStop) - sq, opt, r);
        break;
    }
    case DriverForm::Sampled: {
        integrate(SampledClock{&d}, tStop, opt, r);
        break;
    }
    }

    if (r.status == PointStatus::Alive && atHorizon) {
        // Everything the horizon swallows lies within a disk around
        // lambda(t) whose radius shrinks like sqrt(u - t), with constant
        // at most |c| plus the diameter of the rescaled hull; escaped
        // points keep an order-one distance instead.
        double radius = (std::abs(d.c) + opt.time1RadiusScale) * std::sqrt(std::max(d.u - r.t, 0.0));
        if (std::abs(r.g - eval(d, r.t)) <= radius) {
            r.status = PointStatus::Captured;
            r.t = d.u;
        }
    }
    return r;
}

std::vector<cplx> CaptureGrid::captured_centers() const {
    std::vector<cplx> out;
    for (int iy = 0; iy < spec.ny; ++iy)
        for (int ix = 0; ix < spec.nx; ++ix)
            if (at(ix, iy).status == PointStatus::Captured) out.push_back(spec.center(ix, iy));
    return out;
}

CaptureGrid hull_grid(const Driver& d, double T, const GridSpec& spec, const FlowOptions& opt,
                      int threads) {
    if (spec.nx < 1 || spec.ny < 1) fail(Status::BadArgument, "hull_grid: need at least one cell");
    if (!(spec.x1 > spec.x0 && spec.y1 > spec.y0)) fail(Status::BadArgument, "hull_grid: empty region");

    CaptureGrid grid;
    grid.spec = spec;
    grid.cells.resize(static_cast<size_t>(spec.nx) * spec.ny);

    FlowOptions cellOpt = opt;
    cellOpt.recordTrajectory = false;

    std::atomic<long> nextCell{0};
    std::atomic<long> underflows{0};
    long total = static_cast<long>(grid.cells.size());
    auto worker = [&] {
        for (long i = nextCell.fetch_add(1); i < total; i = nextCell.fetch_add(1)) {
            int ix = static_cast<int>(i % spec.nx);
            int iy = static_cast<int>(i / spec.nx);
            FlowResult f = flow_point(spec.center(ix, iy), d, T, cellOpt);
            GridCell& cell = grid.cells[static_cast<size_t>(i)];
            cell.status = f.status;
            if (f.status == PointStatus::Captured) cell.tCapture = f.t;
            if (f.status == PointStatus::Underflow) underflows.fetch_add(1);
        }
    };

    int n = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
    n = static_cast<int>(std::max<long>(1, std::min<long>(n, total)));
    if (n == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n);
        for (int i = 0; i < n; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    grid.underflowCount = underflows.load();
    return grid;
}

HullBounds hull_bounds(const Driver& d, double T, int samples) {
    if (samples < 2) fail(Status::BadArgument, "hull_bounds: need at least 2 samples");
    T = std::min(T, d.T);
    HullBounds b;
    for (int i = 0; i <= samples; ++i) {
        cplx v = eval(d, T * i / samples);
        if (i == 0) {
            b.reMin = b.reMax = v.real();
            b.imMin = b.imMax = v.imag();
        } else {
            b.reMin = std::min(b.reMin, v.real());
            b.reMax = std::max(b.reMax, v.real());
            b.imMin = std::min(b.imMin, v.imag());
            b.imMax = std::max(b.imMax, v.imag());
        }
    }
    return b;
}

GridSpec default_grid_region(const Driver& d, double T, int nx, int ny, double pad) {
    HullBounds b = hull_bounds(d, T);
    GridSpec s;
    s.x0 = b.reMin - pad;
    s.x1 = b.reMax + pad;
    s.y0 = b.imMin - pad;
    s.y1 = b.imMax + pad;
    s.nx = nx;
    s.ny = ny;
    return s;
}

} // namespace loewner
