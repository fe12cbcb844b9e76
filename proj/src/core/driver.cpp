#include "core/driver.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "core/geometry.hpp"

namespace loewner {

namespace {

void check_time(const Driver& d, double t) {
    // Tolerate horizon-scale roundoff from callers that build t grids.
    const double slack = 1e-12 * std::max(1.0, d.T);
    if (t < -slack || t > d.T + slack)
        fail(Status::OutOfDomain, "driver: t outside [0, T]");
}

} // namespace

Driver sqrt_one_minus_t(cplx c, double T) {
    if (!(T > 0.0 && T <= 1.0)) fail(Status::BadArgument, "sqrt_one_minus_t: horizon must lie in (0, 1]");
    Driver d;
    d.form = DriverForm::SqrtOneMinusT;
    d.c = c;
    d.u = 1.0;
    d.T = T;
    return d;
}

Driver sqrt_tau_plus_t(cplx c, double tau, double T) {
    if (tau < 0.0) fail(Status::BadArgument, "sqrt_tau_plus_t: tau must be nonnegative");
    if (!(T > 0.0)) fail(Status::BadArgument, "sqrt_tau_plus_t: horizon must be positive");
    Driver d;
    d.form = DriverForm::SqrtTauPlusT;
    d.c = c;
    d.tau = tau;
    d.T = T;
    return d;
}

Driver sampled_driver(std::vector<double> times, std::vector<cplx> values) {
    if (times.size() != values.size() || times.size() < 2)
        fail(Status::BadArgument, "sampled_driver: need matching lists with at least 2 samples");
    if (times.front() != 0.0) fail(Status::BadArgument, "sampled_driver: times must start at 0");
    for (size_t i = 1; i < times.size(); ++i)
        if (!(times[i] > times[i - 1])) fail(Status::BadArgument, "sampled_driver: times must be strictly increasing");
    Driver d;
    d.form = DriverForm::Sampled;
    d.T = times.back();
    d.times = std::move(times);
    d.values = std::move(values);
    return d;
}

Driver load_sampled_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(Status::IoError, "load_sampled_csv: cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) fail(Status::IoError, "load_sampled_csv: empty file " + path);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "t,re,im") fail(Status::IoError, "load_sampled_csv: expected header 't,re,im' in " + path);
    std::vector<double> times;
    std::vector<cplx> values;
    size_t lineNo = 1;
    while (std::getline(in, line)) {
        ++lineNo;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::istringstream row(line);
        double t, re, im;
        char c1, c2;
        if (!(row >> t >> c1 >> re >> c2 >> im) || c1 != ',' || c2 != ',')
            fail(Status::IoError, "load_sampled_csv: bad row " + std::to_string(lineNo) + " in " + path);
        times.push_back(t);
        values.emplace_back(re, im);
    }
    return sampled_driver(std::move(times), std::move(values));
}

cplx eval(const Driver& d, double t) {
    check_time(d, t);
    switch (d.form) {
    case DriverForm::SqrtOneMinusT:
        return d.offset + d.c * std::sqrt(std::max(d.u - t, 0.0));
    case DriverForm::SqrtTauPlusT:
        return d.offset + d.c * std::sqrt(std::max(d.tau + t, 0.0));
    case DriverForm::Sampled: {
        const auto& ts = d.times;
        t = std::clamp(t, ts.front(), ts.back());
        const auto it = std::upper_bound(ts.begin(), ts.end(), t);
        const size_t hi = std::min(static_cast<size_t>(it - ts.begin()), ts.size() - 1);
        const size_t lo = hi == 0 ? 0 : hi - 1;
        if (hi == lo) return d.values[lo];
        const double w = (t - ts[lo]) / (ts[hi] - ts[lo]);
        return d.values[lo] + w * (d.values[hi] - d.values[lo]);
    }
    }
    fail(Status::Internal, "eval: unknown driver form");
}

Driver with_horizon(const Driver& d, double T) {
    if (!(T > 0.0)) fail(Status::BadArgument, "with_horizon: horizon must be positive");
    Driver out = d;
    switch (d.form) {
    case DriverForm::SqrtOneMinusT:
        if (T > d.u) fail(Status::BadArgument, "with_horizon: horizon past the singularity time");
        break;
    case DriverForm::SqrtTauPlusT:
        break;
    case DriverForm::Sampled:
        if (T > d.T) fail(Status::OutOfDomain, "with_horizon: sampled driver cannot be extended");
        break;
    }
    out.T = T;
    return out;
}

Driver shift(const Driver& d, double t0) {
    if (!(t0 >= 0.0 && t0 < d.T)) fail(Status::OutOfDomain, "shift: t0 must lie in [0, T)");
    Driver out = d;
    out.T = d.T - t0;
    switch (d.form) {
    case DriverForm::SqrtOneMinusT:
        out.u = d.u - t0;
        break;
    case DriverForm::SqrtTauPlusT:
        out.tau = d.tau + t0;
        break;
    case DriverForm::Sampled: {
        // Re-sample from t0; insert the interpolated start so times begin at 0.
        std::vector<double> times{0.0};
        std::vector<cplx> values{eval(d, t0)};
        for (size_t i = 0; i < d.times.size(); ++i) {
            if (d.times[i] > t0) {
                times.push_back(d.times[i] - t0);
                values.push_back(d.values[i]);
            }
        }
        return sampled_driver(std::move(times), std::move(values));
    }
    }
    return out;
}

Driver rescale(const Driver& d, double a) {
    if (!(a > 0.0)) fail(Status::BadArgument, "rescale: a must be positive");
    Driver out = d;
    out.T = a * a * d.T;
    out.offset = a * d.offset;
    switch (d.form) {
    case DriverForm::SqrtOneMinusT:
        out.u = a * a * d.u; // a*c*sqrt(u - t/a^2) = c*sqrt(a^2 u - t)
        break;
    case DriverForm::SqrtTauPlusT:
        out.tau = a * a * d.tau;
        break;
    case DriverForm::Sampled:
        for (auto& t : out.times) t *= a * a;
        for (auto& v : out.values) v *= a;
        out.T = out.times.back();
        break;
    }
    return out;
}

Driver dual(const Driver& d) {
    const cplx rot(0.0, -1.0);
    Driver out;
    out.T = d.T;
    out.offset = rot * d.offset;
    switch (d.form) {
    case DriverForm::SqrtOneMinusT:
        // -i*c*sqrt(u - (T - t)) = (-ic)*sqrt((u - T) + t)
        out.form = DriverForm::SqrtTauPlusT;
        out.c = rot * d.c;
        out.tau = std::max(d.u - d.T, 0.0);
        break;
    case DriverForm::SqrtTauPlusT:
        // -i*c*sqrt(tau + T - t) = (-ic)*sqrt((tau + T) - t)
        out.form = DriverForm::SqrtOneMinusT;
        out.c = rot * d.c;
        out.u = d.tau + d.T;
        break;
    case DriverForm::Sampled: {
        out.form = DriverForm::Sampled;
        const size_t n = d.times.size();
        out.times.resize(n);
        out.values.resize(n);
        for (size_t i = 0; i < n; ++i) {
            out.times[i] = d.T - d.times[n - 1 - i];
            out.values[i] = rot * d.values[n - 1 - i];
        }
        out.times.front() = 0.0;
        out.offset = cplx{};
        break;
    }
    }
    return out;
}

Driver reflect(const Driver& d, ReflectAxis axis) {
    const auto apply = [axis](cplx z) {
        switch (axis) {
        case ReflectAxis::RealAxis: return std::conj(z);
        case ReflectAxis::ImagAxis: return -std::conj(z);
        case ReflectAxis::Both: return -z;
        }
        return z;
    };
    Driver out = d;
    out.c = apply(d.c);
    out.offset = apply(d.offset);
    for (auto& v : out.values) v = apply(v);
    return out;
}

Driver translate(const Driver& d, cplx a) {
    Driver out = d;
    if (d.form == DriverForm::Sampled) {
        for (auto& v : out.values) v += a;
    } else {
        out.offset += a;
    }
    return out;
}

LipEstimate lip_half_norm(const Driver& d, int samples) {
    if (samples < 2) fail(Status::BadArgument, "lip_half_norm: need at least 2 samples");
    const auto ts = linspace(0.0, d.T, samples);
    std::vector<cplx> vals(ts.size());
    for (size_t i = 0; i < ts.size(); ++i) vals[i] = eval(d, ts[i]);
    LipEstimate best;
    for (size_t i = 0; i < ts.size(); ++i) {
        for (size_t j = i + 1; j < ts.size(); ++j) {
            const double q = std::abs(vals[j] - vals[i]) / std::sqrt(ts[j] - ts[i]);
            if (q > best.norm) best = {q, ts[i], ts[j]};
        }
    }
    return best;
}

} // namespace loewner
