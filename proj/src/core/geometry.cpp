#include "core/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace loewner {

Box bounding_box(const std::vector<cplx>& pts) {
    if (pts.empty()) fail(Status::BadArgument, "bounding_box: empty point set");
    Box b{pts[0].real(), pts[0].real(), pts[0].imag(), pts[0].imag()};
    for (cplx p : pts) {
        b.x0 = std::min(b.x0, p.real());
        b.x1 = std::max(b.x1, p.real());
        b.y0 = std::min(b.y0, p.imag());
        b.y1 = std::max(b.y1, p.imag());
    }
    return b;
}

double dist_point_segment(cplx p, cplx a, cplx b) {
    const cplx ab = b - a;
    const double len2 = std::norm(ab);
    if (len2 == 0.0) return std::abs(p - a);
    double s = ((p.real() - a.real()) * ab.real() + (p.imag() - a.imag()) * ab.imag()) / len2;
    s = std::clamp(s, 0.0, 1.0);
    return std::abs(p - (a + s * ab));
}

double dist_point_polyline(cplx p, const std::vector<cplx>& chain) {
    if (chain.empty()) fail(Status::BadArgument, "dist_point_polyline: empty chain");
    if (chain.size() == 1) return std::abs(p - chain[0]);
    double best = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i + 1 < chain.size(); ++i)
        best = std::min(best, dist_point_segment(p, chain[i], chain[i + 1]));
    return best;
}

double dist_point_cloud(cplx p, const std::vector<cplx>& pts) {
    if (pts.empty()) fail(Status::BadArgument, "dist_point_cloud: empty set");
    double best = std::numeric_limits<double>::infinity();
    for (cplx q : pts) best = std::min(best, std::norm(p - q));
    return std::sqrt(best);
}

double directed_hausdorff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    double worst = 0.0;
    for (cplx p : a) worst = std::max(worst, dist_point_cloud(p, b));
    return worst;
}

double hausdorff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    return std::max(directed_hausdorff(a, b), directed_hausdorff(b, a));
}

double sup_dist_to_polyline(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    double worst = 0.0;
    for (cplx p : a) worst = std::max(worst, dist_point_polyline(p, b));
    return worst;
}

bool point_in_polygon(cplx p, const std::vector<cplx>& polygon) {
    if (polygon.size() < 3) return false;
    const double x = p.real(), y = p.imag();
    bool inside = false;
    size_t j = polygon.size() - 1;
    for (size_t i = 0; i < polygon.size(); j = i++) {
        const double xi = polygon[i].real(), yi = polygon[i].imag();
        const double xj = polygon[j].real(), yj = polygon[j].imag();
        if ((yi > y) != (yj > y)) {
            const double xCross = xi + (y - yi) / (yj - yi) * (xj - xi);
            if (x < xCross) inside = !inside;
        }
    }
    return inside;
}

std::vector<double> linspace(double a, double b, int n) {
    if (n < 2) fail(Status::BadArgument, "linspace: need at least 2 points");
    std::vector<double> out(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) out[static_cast<size_t>(i)] = a + (b - a) * i / (n - 1);
    out.back() = b;
    return out;
}

std::vector<double> decade_grid_one_minus_t(double tEnd, int perDecade) {
    if (!(tEnd > 0.0 && tEnd < 1.0)) fail(Status::BadArgument, "decade_grid_one_minus_t: tEnd must be in (0,1)");
    if (perDecade < 1) fail(Status::BadArgument, "decade_grid_one_minus_t: perDecade must be positive");
    const double uMax = -0.5 * std::log1p(-tEnd);
    const double du = std::log(10.0) / (2.0 * perDecade);
    std::vector<double> out;
    out.reserve(static_cast<size_t>(uMax / du) + 2);
    out.push_back(0.0);
    for (double u = du; u < uMax - 0.5 * du; u += du) out.push_back(-std::expm1(-2.0 * u));
    out.push_back(tEnd);
    return out;
}

std::vector<double> decade_grid_tau_plus_t(double tau, double tEnd, int perDecade) {
    if (!(tau > 0.0)) fail(Status::BadArgument, "decade_grid_tau_plus_t: tau must be positive");
    if (!(tEnd > 0.0)) fail(Status::BadArgument, "decade_grid_tau_plus_t: tEnd must be positive");
    if (perDecade < 1) fail(Status::BadArgument, "decade_grid_tau_plus_t: perDecade must be positive");
    const double vMax = 0.5 * std::log((tau + tEnd) / tau);
    const double dv = std::log(10.0) / (2.0 * perDecade);
    std::vector<double> out;
    out.reserve(static_cast<size_t>(vMax / dv) + 2);
    out.push_back(0.0);
    for (double v = dv; v < vMax - 0.5 * dv; v += dv) out.push_back(tau * std::expm1(2.0 * v));
    out.push_back(tEnd);
    return out;
}

} // namespace loewner
