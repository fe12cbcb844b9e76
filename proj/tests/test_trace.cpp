#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "core/flow.hpp"
#include "core/geometry.hpp"
#include "core/trace.hpp"

using namespace loewner;

namespace {

const double kRt2 = std::sqrt(2.0);
const double kPi = 3.14159265358979323846;

// c = 3*sqrt(2): the hull is the arc of the circle |z - 2*sqrt(2)| = sqrt(2)
// grown symmetrically from c, with the whole circle closed at time 1.
// The tips satisfy (z - B*sqrt(1-t))^2 / (z - A*sqrt(1-t)) = (c-B)^2/(c-A)
// = 4*sqrt(2), and the top of the circle is reached exactly at t = 3/4.
const cplx kDiskC(3 * kRt2, 0.0);
const cplx kDiskCenter(2 * kRt2, 0.0);

std::vector<double> disk_grid() {
    std::vector<double> g;
    for (int k = 0; k <= 19; ++k) g.push_back(0.05 * k);
    g.push_back(0.99);
    return g;
}

const HullTrace& side_of(const std::vector<HullTrace>& v, TraceSide s) {
    return v[0].side == s ? v[0] : v[1];
}

// Captured cells with a non-captured 4-neighbour.  A filled region yields
// its outline; a one-cell-wide column yields the column itself.
std::vector<cplx> captured_boundary(const CaptureGrid& g) {
    auto cap = [&](int ix, int iy) {
        return ix >= 0 && ix < g.spec.nx && iy >= 0 && iy < g.spec.ny &&
               g.at(ix, iy).status == PointStatus::Captured;
    };
    std::vector<cplx> out;
    for (int iy = 0; iy < g.spec.ny; ++iy)
        for (int ix = 0; ix < g.spec.nx; ++ix)
            if (cap(ix, iy) && !(cap(ix - 1, iy) && cap(ix + 1, iy) &&
                                 cap(ix, iy - 1) && cap(ix, iy + 1)))
                out.push_back(g.spec.center(ix, iy));
    return out;
}

std::vector<cplx> all_samples(const std::vector<HullTrace>& traces) {
    std::vector<cplx> pts;
    for (const auto& tr : traces)
        for (const auto& s : tr.samples) pts.push_back(s.z);
    return pts;
}

} // namespace

TEST_CASE("disk example: both traces run along the circle") {
    auto traces = trace_tips_family1(kDiskC, disk_grid());
    REQUIRE(traces.size() == 2);
    Family1Params p = family1_params(kDiskC);
    const auto& up = side_of(traces, TraceSide::Upper);
    const auto& low = side_of(traces, TraceSide::Lower);
    REQUIRE(up.samples.size() == disk_grid().size());
    for (const auto& s : up.samples) {
        CHECK(std::abs(std::abs(s.z - kDiskCenter) - kRt2) <= 1e-9);
        // exponentiated tip equation: (z-B)^2/(z-A) = 4*sqrt(2)*sqrt(1-t)
        cplx inv = (s.z - p.B) * (s.z - p.B) / (s.z - p.A);
        CHECK(std::abs(inv - 4 * kRt2 * std::sqrt(1.0 - s.t)) <= 1e-8);
        if (s.t > 0.0) CHECK(s.z.imag() > 0.0);
        CHECK(s.residual <= 1e-10);
        CHECK(tip_residual_family1(p, s) <= 1e-9);
    }
    // the tip accreted at t is the point captured at that time; the top
    // of the circle has capture time 3/4
    const auto& topSample = up.samples[15];
    REQUIRE(topSample.t == doctest::Approx(0.75));
    CHECK(std::abs(topSample.z - (kDiskCenter + cplx(0.0, kRt2))) <= 1e-8);
    // real coefficient: the lower trace is the mirror image
    for (size_t i = 0; i < up.samples.size(); ++i)
        CHECK(std::abs(low.samples[i].z - std::conj(up.samples[i].z)) <= 1e-9);
    // Re(alpha) < 0: the arcs close into a loop, both ends at B
    REQUIRE(up.endpoint.has_value());
    REQUIRE(low.endpoint.has_value());
    CHECK(std::abs(*up.endpoint - p.B) <= 1e-12);
    CHECK(std::abs(*low.endpoint - p.B) <= 1e-12);
    CHECK(!up.selfHitTime.has_value());
    CHECK(!low.selfHitTime.has_value());
}

TEST_CASE("simple arc: windings, endpoint sides, reflection") {
    const cplx c(3.31, 1.15);
    auto grid = decade_grid_one_minus_t(1.0 - 1e-6, 32);
    auto traces = trace_tips_family1(c, grid);
    Family1Params p = family1_params(c);
    const auto& up = side_of(traces, TraceSide::Upper);
    const auto& low = side_of(traces, TraceSide::Lower);

    REQUIRE(up.endpoint.has_value());
    REQUIRE(low.endpoint.has_value());
    CHECK(std::abs(*up.endpoint - p.A) <= 1e-12);
    CHECK(std::abs(*low.endpoint - p.B) <= 1e-12);
    CHECK(up.endpointGap < 0.5);
    CHECK(low.endpointGap < 0.5);
    for (const auto& s : up.samples) CHECK(s.residual <= 1e-10);

    // the upper curve spirals counterclockwise into A: more than two
    // full turns by u = -log sqrt(1e-6)
    double turnsA = (up.samples.back().argZA - up.samples.front().argZA) / (2 * kPi);
    CHECK(turnsA >= 2.0);
    // the lower curve winds clockwise about B, well short of a turn
    double turnsB = (low.samples.back().argZB - low.samples.front().argZB) / (2 * kPi);
    CHECK(turnsB < 0.0);
    CHECK(turnsB > -1.0);

    // conjugating the coefficient mirrors the hull and swaps the sides
    auto mirrored = trace_tips_family1(std::conj(c), grid);
    const auto& mup = side_of(mirrored, TraceSide::Upper);
    for (size_t i = 0; i < grid.size(); ++i)
        CHECK(std::abs(mup.samples[i].z - std::conj(low.samples[i].z)) <= 1e-9);
    REQUIRE(mup.endpoint.has_value());
    CHECK(std::abs(*mup.endpoint - std::conj(*low.endpoint)) <= 1e-12);
}

TEST_CASE("family 2 on the vertical line: geometry and scaling") {
    const cplx c(0.0, 3 * kRt2);
    const double tau = 0.25;
    auto grid = decade_grid_tau_plus_t(tau, 3.0, 24);
    auto traces = trace_tips_family2(c, tau, grid);
    Family2Params p = family2_params(c, tau);
    const auto& up = side_of(traces, TraceSide::Upper);
    const auto& low = side_of(traces, TraceSide::Lower);
    double imPoleD = (p.D * std::sqrt(tau)).imag();
    double imStart = (c * std::sqrt(tau)).imag();
    for (size_t i = 0; i < grid.size(); ++i) {
        CHECK(std::abs(up.samples[i].z.real()) <= 1e-9);
        CHECK(std::abs(low.samples[i].z.real()) <= 1e-9);
        if (i > 0) {
            CHECK(up.samples[i].z.imag() > up.samples[i - 1].z.imag());
            CHECK(low.samples[i].z.imag() < low.samples[i - 1].z.imag());
        }
        // the descending side decelerates into the pole D*sqrt(tau)
        CHECK(low.samples[i].z.imag() > imPoleD);
        CHECK(low.samples[i].z.imag() <= imStart + 1e-12);
        CHECK(up.samples[i].residual <= 1e-10);
        CHECK(tip_residual_family2(p, up.samples[i]) <= 1e-9);
        CHECK(tip_residual_family2(p, low.samples[i]) <= 1e-9);
    }
    CHECK(!up.endpoint.has_value());

    // lambda_a(t) = a*lambda(t/a^2) turns (c, tau) into (c, a^2 tau):
    // the hull scales by a at time a^2 t
    const double a = 2.0;
    std::vector<double> grid4;
    for (double t : grid) grid4.push_back(a * a * t);
    auto scaled = trace_tips_family2(c, a * a * tau, grid4);
    const auto& sup = side_of(scaled, TraceSide::Upper);
    const auto& slow = side_of(scaled, TraceSide::Lower);
    for (size_t i = 0; i < grid.size(); ++i) {
        CHECK(std::abs(sup.samples[i].z - a * up.samples[i].z) <= 1e-8);
        CHECK(std::abs(slow.samples[i].z - a * low.samples[i].z) <= 1e-8);
    }
}

TEST_CASE("transitional coefficient closes its loop at the predicted time") {
    auto bp = boundary_on_ray(std::atan2(0.511, 3.687));
    REQUIRE(bp.has_value());
    Phase ph = classify_phase(bp->c);
    REQUIRE(ph.kind == PhaseKind::Transitional);
    REQUIRE(ph.criticalTime.has_value());
    double tc = *ph.criticalTime;
    CHECK(tc > 0.999);
    CHECK(tc < 1.0);

    auto grid = decade_grid_one_minus_t(1.0 - 1e-5, 24);
    auto traces = trace_tips_family1(bp->c, grid);
    const auto& up = side_of(traces, TraceSide::Upper);
    const auto& low = side_of(traces, TraceSide::Lower);
    REQUIRE(up.selfHitTime.has_value());
    CHECK(std::abs(*up.selfHitTime - tc) <= 1e-3);
    CHECK(!low.selfHitTime.has_value());
    CHECK(!up.endpoint.has_value());
}

TEST_CASE("sqrt-t hull closed form") {
    // vertical segment [0, i*4*sqrt(2t)]: one prime end, tips coincide
    const cplx c2(0.0, 3 * kRt2);
    for (double t : {0.3, 1.0, 2.0}) {
        SqrtTHull h = sqrt_t_hull(c2, t);
        CHECK(h.segmentCount == 1);
        cplx tip(0.0, 4.0 * std::sqrt(2.0 * t));
        CHECK(std::abs(h.tipUpper - tip) <= 1e-13 * std::abs(tip));
        CHECK(std::abs(h.tipLower - tip) <= 1e-13 * std::abs(tip));
    }
    // constant zero driver: the symmetric two-sided needle
    SqrtTHull h0 = sqrt_t_hull(cplx(0.0, 0.0), 0.25);
    CHECK(h0.segmentCount == 2);
    CHECK(std::abs(h0.tipUpper - cplx(0.0, 1.0)) <= 1e-14);
    CHECK(std::abs(h0.tipLower - cplx(0.0, -1.0)) <= 1e-14);
    // real coefficient: two segments, mirror images, at angle pi*delta
    SqrtTHull h1 = sqrt_t_hull(cplx(1.0, 0.0), 1.0);
    Family2Params p1 = family2_params(cplx(1.0, 0.0), 0.0);
    CHECK(h1.segmentCount == 2);
    CHECK(std::abs(h1.tipLower - std::conj(h1.tipUpper)) <= 1e-13);
    CHECK(std::arg(h1.tipUpper) == doctest::Approx(kPi * p1.delta.real()).epsilon(1e-10));
    // negating the coefficient negates the hull and swaps the sides
    SqrtTHull hn = sqrt_t_hull(cplx(-1.0, 0.0), 1.0);
    CHECK(std::abs(hn.tipUpper + h1.tipLower) <= 1e-13);
    CHECK(std::abs(hn.tipLower + h1.tipUpper) <= 1e-13);
}

TEST_CASE("sqrt-t tips are captured by the flow at their accretion time") {
    // the tip added at time s has lifetime exactly s under the flow
    for (cplx c : {cplx(1.0, 0.0), cplx(-0.8, -0.3)}) {
        SqrtTHull h = sqrt_t_hull(c, 0.5);
        Driver d = sqrt_tau_plus_t(c, 0.0, 0.7);
        FlowOptions opt;
        opt.captureRadius = 1e-4;
        for (cplx tip : {h.tipUpper, h.tipLower}) {
            FlowResult r = flow_point(tip, d, 0.7, opt);
            REQUIRE(r.status == PointStatus::Captured);
            CHECK(std::abs(r.t - 0.5) <= 2e-3);
        }
    }
}

TEST_CASE("zipper: constant driver is exact") {
    Driver d = sampled_driver({0.0, 1.0}, {cplx(0, 0), cplx(0, 0)});
    ZipperOptions zo;
    zo.samplesPerStep = 2;
    auto traces = zipper_trace(d, 16, zo);
    const auto& up = side_of(traces, TraceSide::Upper);
    const auto& low = side_of(traces, TraceSide::Lower);
    CHECK(!up.lipGuardExceeded);
    for (const auto& s : up.samples)
        CHECK(std::abs(s.z - cplx(0.0, 2.0 * std::sqrt(s.t))) <= 5e-13);
    for (const auto& s : low.samples)
        CHECK(std::abs(s.z - cplx(0.0, -2.0 * std::sqrt(s.t))) <= 5e-13);
}

TEST_CASE("zipper reproduces the straight slit of the sqrt-t driver") {
    Driver d = sqrt_tau_plus_t(cplx(0.0, 3 * kRt2), 0.0, 1.0);
    ZipperOptions zo;
    zo.samplesPerStep = 4;
    auto traces = zipper_trace(d, 64, zo);
    cplx tip(0.0, 4.0 * kRt2);
    for (const auto& tr : traces) {
        REQUIRE(tr.samples.size() > 64u);
        double sup = 0.0;
        for (const auto& s : tr.samples)
            sup = std::max(sup, dist_point_segment(s.z, cplx(0, 0), tip));
        CHECK(sup <= 1e-10);
        CHECK(std::abs(tr.samples.back().z - tip) <= 1e-10);
    }
}

TEST_CASE("zipper matches the implicit trace on a simple arc") {
    const cplx c(3.31, 1.15);
    Driver d = sqrt_one_minus_t(c);
    d = with_horizon(d, 1.0 - 1e-3);
    const int n = 600;
    auto traces = zipper_trace(d, n);
    const auto& zup = side_of(traces, TraceSide::Upper);
    const auto& zlow = side_of(traces, TraceSide::Lower);
    std::vector<double> grid;
    for (const auto& s : zup.samples) grid.push_back(s.t);
    grid.front() = 0.0;
    auto imp = trace_tips_family1(c, grid);
    const auto& iup = side_of(imp, TraceSide::Upper);
    const auto& ilow = side_of(imp, TraceSide::Lower);
    REQUIRE(zup.samples.size() == iup.samples.size());
    double supU = 0.0, supL = 0.0;
    for (size_t i = 0; i < grid.size(); ++i) {
        supU = std::max(supU, std::abs(zup.samples[i].z - iup.samples[i].z));
        supL = std::max(supL, std::abs(zlow.samples[i].z - ilow.samples[i].z));
    }
    CHECK(supU <= 0.02);
    CHECK(supL <= 0.02);
}

TEST_CASE("zipper flags a rough final step at the full horizon") {
    Driver d = sqrt_one_minus_t(cplx(3.31, 1.15));
    auto traces = zipper_trace(d, 64);
    CHECK(traces[0].lipGuardExceeded);
    for (const auto& tr : traces)
        for (const auto& s : tr.samples) {
            CHECK(std::isfinite(s.z.real()));
            CHECK(std::isfinite(s.z.imag()));
        }
}

TEST_CASE("zipper traces rescale with the driver") {
    const cplx c(2.2, 0.9);
    const double a = 1.7;
    Driver d = with_horizon(sqrt_one_minus_t(c), 0.8);
    Driver big = rescale(d, a);
    ZipperOptions zo;
    zo.samplesPerStep = 2;
    auto base = zipper_trace(d, 200, zo);
    auto scaled = zipper_trace(big, 200, zo);
    for (int side = 0; side < 2; ++side) {
        const auto& b = base[side];
        const auto& s = scaled[side];
        REQUIRE(b.samples.size() == s.samples.size());
        CHECK(b.side == s.side);
        CHECK(b.lipGuardExceeded == s.lipGuardExceeded);
        double worst = 0.0, worstT = 0.0;
        for (size_t i = 0; i < b.samples.size(); ++i) {
            worstT = std::max(worstT, std::abs(s.samples[i].t - a * a * b.samples[i].t));
            worst = std::max(worst, std::abs(s.samples[i].z - a * b.samples[i].z));
        }
        CHECK(worstT <= 1e-12);
        CHECK(worst <= 1e-8);
    }
}

TEST_CASE("zipper point set matches the capture-grid boundary") {
    SUBCASE("disk at the full horizon") {
        // At the horizon the grid marks the whole closed disk captured, so
        // the outline of the captured set is the circle the tips run along.
        Driver d = sqrt_one_minus_t(kDiskC);
        GridSpec spec;
        spec.x0 = 1.2; spec.x1 = 4.6; spec.nx = 48;
        spec.y0 = -1.6; spec.y1 = 1.6; spec.ny = 40;
        CaptureGrid g = hull_grid(d, 1.0, spec);
        auto ring = captured_boundary(g);
        REQUIRE(ring.size() > 40u);
        ZipperOptions zo;
        zo.samplesPerStep = 4;
        auto pts = all_samples(zipper_trace(d, 128, zo));
        CHECK(hausdorff(pts, ring) <= 2.0 * spec.cellDiag());
    }
    SUBCASE("straight slit, grid column on the axis") {
        // Cell centres only see a one-dimensional hull if some of them lie
        // on it: an odd column count puts one column exactly on the axis.
        Driver d = sqrt_tau_plus_t(cplx(0.0, 3.0 * kRt2), 0.0);
        GridSpec spec;
        spec.x0 = -1.5; spec.x1 = 1.5; spec.nx = 31;
        spec.y0 = -0.5; spec.y1 = 6.5; spec.ny = 70;
        FlowOptions fo;
        fo.captureRadius = 1e-4;
        CaptureGrid g = hull_grid(d, 1.0, spec, fo);
        auto band = captured_boundary(g);
        REQUIRE(band.size() > 40u);
        ZipperOptions zo;
        zo.samplesPerStep = 64;
        auto pts = all_samples(zipper_trace(d, 64, zo));
        CHECK(hausdorff(pts, band) <= 2.0 * spec.cellDiag());
    }
}

TEST_CASE("trace and zipper argument validation") {
    std::vector<double> grid{0.0, 0.5};
    CHECK_THROWS_AS(trace_tips_family2(cplx(1, 1), 0.0, grid), Error);
    CHECK_THROWS_AS(trace_tips_family1(cplx(1, 1), {0.0, 1.0}), Error);
    CHECK_THROWS_AS(trace_tips_family1(cplx(1, 1), {0.5, 0.5}), Error);
    CHECK_THROWS_AS(trace_tips_family1(cplx(4, 0), grid), Error);
    CHECK_THROWS_AS(sqrt_t_hull(cplx(0, 4), 1.0), Error);
    Driver d = sqrt_one_minus_t(cplx(3, 0), 0.5);
    CHECK_THROWS_AS(zipper_trace(d, 0), Error);
    ZipperOptions zo;
    zo.samplesPerStep = 0;
    CHECK_THROWS_AS(zipper_trace(d, 8, zo), Error);
}
