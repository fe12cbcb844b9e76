#include <doctest.h>

#include <cmath>
#include <random>

#include "core/flow.hpp"
#include "core/geometry.hpp"
#include "core/params.hpp"

using namespace loewner;

namespace {

const double kRt2 = std::sqrt(2.0);

// Example driver c = 3*sqrt(2): A = 2*sqrt(2), B = sqrt(2), alpha = -1,
// beta = 2.  The flow satisfies the exact algebraic invariant
//   (g - B*sqrt(1-t))^2 / (g - A*sqrt(1-t)) = (z - B)^2 / (z - A),
// the hull at time 1 is the closed disk |z - 2*sqrt(2)| <= sqrt(2), and
// the time-1 map is g(z) = z + 2/(z - 2*sqrt(2)).
Driver disk_driver() { return sqrt_one_minus_t(cplx(3 * kRt2, 0)); }

cplx disk_invariant(cplx g, double t) {
    cplx a = 2 * kRt2 * std::sqrt(1.0 - t);
    cplx b = kRt2 * std::sqrt(1.0 - t);
    return (g - b) * (g - b) / (g - a);
}

} // namespace

TEST_CASE("disk example: algebraic invariant holds along the flow") {
    const Driver d = disk_driver();
    for (int k = 0; k < 12; ++k) {
        double ang = 2 * M_PI * k / 12;
        cplx z = cplx(2 * kRt2, 0) + (kRt2 + 0.5) * std::polar(1.0, ang);
        cplx q0 = disk_invariant(z, 0.0);
        for (double t : {0.25, 0.5, 0.9, 0.99}) {
            FlowResult r = flow_point(z, d, t);
            REQUIRE(r.status == PointStatus::Alive);
            CHECK(std::abs(r.t - t) < 1e-12);
            CHECK(std::abs(disk_invariant(r.g, t) - q0) < 1e-6 * std::abs(q0));
        }
    }
}

TEST_CASE("disk example: full-horizon run reproduces the time-1 map") {
    const Driver d = disk_driver();
    for (int k = 0; k < 10; ++k) {
        double ang = 2 * M_PI * k / 10;
        cplx z = cplx(2 * kRt2, 0) + (kRt2 + 0.5) * std::polar(1.0, ang);
        FlowResult r = flow_point(z, d, 1.0);
        REQUIRE(r.status == PointStatus::Alive);
        cplx expected = z + 2.0 / (z - 2 * kRt2);
        CHECK(std::abs(r.g - expected) < 1e-6 * std::abs(expected));
    }
}

TEST_CASE("disk example: capture classification") {
    const Driver d = disk_driver();
    const cplx center(2 * kRt2, 0);

    // Circle points are swallowed when the trace reaches them; for the
    // top of the circle the invariant gives T_z = 3/4.  A boundary
    // trajectory is unstable below sqrt(ode error), so detect capture at
    // a radius where the run is still on the true trajectory.
    FlowOptions opt;
    opt.captureRadius = 1e-4;
    FlowResult top = flow_point(center + cplx(0, kRt2), d, 1.0, opt);
    REQUIRE(top.status == PointStatus::Captured);
    CHECK(std::abs(top.t - 0.75) < 1e-6);

    // Strictly interior points survive every t < 1 and are swallowed
    // exactly at the horizon.
    FlowResult inside = flow_point(center + cplx(0, 0.5), d, 1.0);
    REQUIRE(inside.status == PointStatus::Captured);
    CHECK(inside.t > 1.0 - 1e-6);
    FlowResult early = flow_point(center + cplx(0, 0.5), d, 0.9);
    CHECK(early.status == PointStatus::Alive);

    // Near-boundary discrimination on both sides.
    CHECK(flow_point(center + cplx(0, kRt2 - 0.05), d, 1.0).status == PointStatus::Captured);
    CHECK(flow_point(center + cplx(0, kRt2 + 0.05), d, 1.0).status == PointStatus::Alive);
    CHECK(flow_point(center + cplx(0, 2.0), d, 1.0).status == PointStatus::Alive);
}

TEST_CASE("roots flow exactly along P*sqrt(1-t)") {
    std::mt19937_64 rng(424242);
    std::uniform_real_distribution<double> coord(-6.0, 6.0);
    int testedA = 0, testedB = 0;
    for (int trial = 0; trial < 40; ++trial) {
        cplx c(coord(rng), coord(rng));
        if (std::abs(c - 4.0) < 0.3 || std::abs(c + 4.0) < 0.3) continue;
        Family1Params p = family1_params(c);
        const Driver d = sqrt_one_minus_t(c);
        // The transverse error around the P trajectory grows like
        // (1-t)^{Re(2/Q^2)} with Q the other root; only test where that
        // amplification stays modest.
        auto check = [&](cplx P, cplx Q, int& count) {
            if (std::real(2.0 / (Q * Q)) < -0.5) return;
            FlowResult r = flow_point(P, d, 0.9);
            REQUIRE(r.status == PointStatus::Alive);
            CHECK(std::abs(r.g - P * std::sqrt(0.1)) < 1e-6 * std::max(1.0, std::abs(P)));
            ++count;
        };
        check(p.A, p.B, testedA);
        check(p.B, p.A, testedB);
    }
    CHECK(testedA >= 15);
    CHECK(testedB >= 5);
}

TEST_CASE("points above the driver level stay above it") {
    // For Im(c) >= 0 the quantity Im(g) - Im(lambda) is forward
    // invariant once nonnegative.
    const Driver d = sqrt_one_minus_t(cplx(3, 2));
    FlowOptions opt;
    opt.recordTrajectory = true;
    for (cplx z : {cplx(4, 2), cplx(-1, 3), cplx(3.2, 2.5)}) {
        FlowResult r = flow_point(z, d, 0.95, opt);
        for (const auto& [t, g] : r.trajectory)
            CHECK(g.imag() >= eval(d, t).imag() - 1e-7);
    }
}

TEST_CASE("points right of the driver strip escape monotonically") {
    const Driver d = disk_driver();
    FlowOptions opt;
    opt.recordTrajectory = true;
    FlowResult r = flow_point(cplx(3 * kRt2 + 1.0, 2.0), d, 1.0, opt);
    REQUIRE(r.status == PointStatus::Alive);
    REQUIRE(r.trajectory.size() > 10);
    for (size_t i = 1; i < r.trajectory.size(); ++i)
        CHECK(r.trajectory[i].second.real() >= r.trajectory[i - 1].second.real() - 1e-9);
}

TEST_CASE("constant driver: exact map sqrt(z^2 + 4t)") {
    const Driver d = sampled_driver({0.0, 1.0}, {cplx(0, 0), cplx(0, 0)});

    FlowResult up = flow_point(cplx(0, 3), d, 1.0);
    REQUIRE(up.status == PointStatus::Alive);
    CHECK(std::abs(up.g - cplx(0, std::sqrt(5.0))) < 1e-8);

    FlowResult down = flow_point(cplx(0, -3), d, 1.0);
    REQUIRE(down.status == PointStatus::Alive);
    CHECK(std::abs(down.g - cplx(0, -std::sqrt(5.0))) < 1e-8);

    cplx z(1.0, 0.5);
    FlowResult side = flow_point(z, d, 1.0);
    REQUIRE(side.status == PointStatus::Alive);
    CHECK(std::abs(side.g - std::sqrt(z * z + 4.0)) < 1e-8);

    // The hull at time t is the segment [-2i sqrt(t), 2i sqrt(t)], so
    // z = iy is swallowed at t = y^2/4.
    FlowOptions opt;
    opt.captureRadius = 1e-4;
    for (double y : {0.25, 1.0, 1.8}) {
        FlowResult r = flow_point(cplx(0, y), d, 1.0, opt);
        REQUIRE(r.status == PointStatus::Captured);
        CHECK(std::abs(r.t - y * y / 4.0) < 1e-6);
        FlowResult m = flow_point(cplx(0, -y), d, 1.0, opt);
        REQUIRE(m.status == PointStatus::Captured);
        CHECK(std::abs(m.t - y * y / 4.0) < 1e-6);
    }
}

TEST_CASE("segment example: capture times on the growing slit") {
    // c = i*3*sqrt(2), tau = 0: the hull at time t is [0, i*4*sqrt(2t)],
    // so z = iy is swallowed at t = y^2/32.  The driver has its cusp at
    // t = 0, which the clock substitution must cross cleanly.
    const Driver d = sqrt_tau_plus_t(cplx(0, 3 * kRt2), 0.0);
    FlowOptions opt;
    opt.captureRadius = 1e-4;
    for (double y : {0.1, 0.5, 2.0, 5.0}) {
        FlowResult r = flow_point(cplx(0, y), d, 1.0, opt);
        REQUIRE(r.status == PointStatus::Captured);
        CHECK(std::abs(r.t - y * y / 32.0) < 1e-6);
    }
    CHECK(flow_point(cplx(0, 6), d, 1.0, opt).status == PointStatus::Alive);
    CHECK(flow_point(cplx(1, 1), d, 1.0, opt).status == PointStatus::Alive);
    CHECK(flow_point(cplx(-0.3, 2), d, 1.0, opt).status == PointStatus::Alive);
}

TEST_CASE("hull grid matches the disk and stays in the driver strip") {
    const Driver d = disk_driver();
    GridSpec spec;
    spec.x0 = 1.2;
    spec.x1 = 4.6;
    spec.y0 = -1.6;
    spec.y1 = 1.6;
    spec.nx = 48;
    spec.ny = 40;
    CaptureGrid grid = hull_grid(d, 1.0, spec);
    CHECK(grid.underflowCount == 0);

    std::vector<cplx> captured = grid.captured_centers();
    REQUIRE(captured.size() > 100);

    const cplx center(2 * kRt2, 0);
    double tol = 2.0 * spec.cellDiag();
    double reLo = 0.0, reHi = 3 * kRt2;
    for (cplx z : captured) {
        CHECK(std::abs(z - center) <= kRt2 + tol);
        CHECK(z.real() >= reLo - 0.05);
        CHECK(z.real() <= reHi + 0.05);
    }

    // Every point of the disk has a captured center nearby.
    double worst = 0.0;
    for (double x = 1.3; x <= 4.5; x += 0.03)
        for (double y = -1.5; y <= 1.5; y += 0.03) {
            cplx p(x, y);
            if (std::abs(p - center) > kRt2) continue;
            worst = std::max(worst, dist_point_cloud(p, captured));
        }
    CHECK(worst <= tol);
}

TEST_CASE("hull grid recovers the straight slit") {
    // The hull of i*3*sqrt(2)*sqrt(t) is the segment [0, i*4*sqrt(2t)].
    // It is one-dimensional, so the grid is laid out with an odd column
    // count: one column of cell centres falls exactly on the axis.
    Driver d = sqrt_tau_plus_t(cplx(0.0, 3.0 * kRt2), 0.0);
    GridSpec spec;
    spec.x0 = -1.5;
    spec.x1 = 1.5;
    spec.y0 = -0.5;
    spec.y1 = 6.5;
    spec.nx = 31;
    spec.ny = 70;
    FlowOptions opt;
    opt.captureRadius = 1e-4;
    CaptureGrid grid = hull_grid(d, 1.0, spec, opt);
    CHECK(grid.underflowCount == 0);

    std::vector<cplx> captured = grid.captured_centers();
    REQUIRE(captured.size() > 40);

    const cplx tip(0.0, 4.0 * kRt2);
    double tol = 2.0 * spec.cellDiag();
    for (cplx z : captured) {
        CHECK(dist_point_segment(z, cplx(0.0, 0.0), tip) <= tol);
        // capture time of i*y is y^2/32
        double iy = z.imag();
        double tc = grid.at(15, int((iy - spec.y0) / spec.dy())).tCapture;
        CHECK(std::abs(tc - iy * iy / 32.0) <= 1e-5);
    }
    for (int k = 0; k <= 200; ++k)
        CHECK(dist_point_cloud(tip * (k / 200.0), captured) <= tol);
}

TEST_CASE("hull grid is deterministic across thread counts") {
    const Driver d = disk_driver();
    GridSpec spec;
    spec.x0 = 1.2;
    spec.x1 = 4.6;
    spec.y0 = -0.2;
    spec.y1 = 1.6;
    spec.nx = 16;
    spec.ny = 12;
    CaptureGrid one = hull_grid(d, 1.0, spec, {}, 1);
    CaptureGrid two = hull_grid(d, 1.0, spec, {}, 2);
    REQUIRE(one.cells.size() == two.cells.size());
    for (size_t i = 0; i < one.cells.size(); ++i) {
        CHECK(one.cells[i].status == two.cells[i].status);
        CHECK(one.cells[i].tCapture == two.cells[i].tCapture);
    }
}

TEST_CASE("flow results are reproducible and trajectories well formed") {
    const Driver d = sqrt_one_minus_t(cplx(3.31, 1.15));
    FlowOptions opt;
    opt.recordTrajectory = true;
    FlowResult a = flow_point(cplx(1, 2), d, 0.8, opt);
    FlowResult b = flow_point(cplx(1, 2), d, 0.8, opt);
    CHECK(a.g == b.g);
    CHECK(a.t == b.t);
    CHECK(a.steps == b.steps);
    REQUIRE(!a.trajectory.empty());
    CHECK(a.trajectory.front().first == 0.0);
    for (size_t i = 1; i < a.trajectory.size(); ++i)
        CHECK(a.trajectory[i].first > a.trajectory[i - 1].first);
    CHECK(std::abs(a.trajectory.back().first - a.t) < 1e-12);
}

TEST_CASE("flow and grid argument validation") {
    const Driver d = disk_driver();
    CHECK_THROWS_AS(flow_point(cplx(0, 1), d, -0.5), Error);
    CHECK_THROWS_AS(flow_point(cplx(0, 1), d, 1.5), Error);

    GridSpec bad;
    bad.nx = 0;
    CHECK_THROWS_AS(hull_grid(d, 1.0, bad), Error);
    GridSpec empty;
    empty.x0 = 1.0;
    empty.x1 = 1.0;
    CHECK_THROWS_AS(hull_grid(d, 1.0, empty), Error);
    CHECK_THROWS_AS(hull_bounds(d, 1.0, 1), Error);
}

TEST_CASE("hull bounds cover the driver range") {
    HullBounds b = hull_bounds(disk_driver(), 1.0);
    CHECK(b.reMin == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(b.reMax == doctest::Approx(3 * kRt2).epsilon(1e-12));
    CHECK(b.imMin == 0.0);
    CHECK(b.imMax == 0.0);

    GridSpec s = default_grid_region(disk_driver(), 1.0, 30, 20, 2.0);
    CHECK(s.x0 == doctest::Approx(-2.0));
    CHECK(s.x1 == doctest::Approx(3 * kRt2 + 2.0));
    CHECK(s.nx == 30);
    CHECK(s.cellDiag() > 0.0);
}
