#pragma once

#include <string>
#include <vector>

#include "core/params.hpp"

namespace loewner {

enum class DriverForm {
    SqrtOneMinusT, // lambda(t) = offset + c*sqrt(u - t), u the singularity time
    SqrtTauPlusT,  // lambda(t) = offset + c*sqrt(tau + t)
    Sampled,       // piecewise-linear interpolant of (times, values)
};

enum class ReflectAxis { RealAxis, ImagAxis, Both };

// An evaluable driving function on [0, T].  The closed forms carry their
// family tag and parameters through every transformation so downstream
// consumers can use exact parameter algebra; Sampled is the fallback.
//
// The canonical families have offset = 0 and (for SqrtOneMinusT) u = 1.
// shift/rescale/dual/translate produce the generalized members: shifting
// c*sqrt(1-t) by t0 gives u = 1-t0, rescaling by a gives u = a^2,
// translating adds a constant offset.  All of these stay closed-form.
struct Driver {
    DriverForm form = DriverForm::SqrtOneMinusT;
    double T = 1.0;
    cplx c;
    double u = 1.0;   // SqrtOneMinusT only
    double tau = 0.0; // SqrtTauPlusT only
    cplx offset;
    std::vector<double> times; // Sampled only
    std::vector<cplx> values;  // Sampled only
};

Driver sqrt_one_minus_t(cplx c, double T = 1.0);
Driver sqrt_tau_plus_t(cplx c, double tau, double T = 1.0);
Driver sampled_driver(std::vector<double> times, std::vector<cplx> values);

// CSV with required header "t,re,im"; t strictly increasing from 0.
Driver load_sampled_csv(const std::string& path);

cplx eval(const Driver& d, double t);

// Same driver with a shorter (or, for closed forms, extended) horizon.
Driver with_horizon(const Driver& d, double T);

// lambda(t0 + .) on [0, T - t0].
Driver shift(const Driver& d, double t0);

// a * lambda(. / a^2) on [0, a^2 T].
Driver rescale(const Driver& d, double a);

// -i * lambda(T - .) on [0, T]: the driver whose left hull is the
// right hull of d rotated by -i.  Applying dual twice yields -lambda
// (the Both reflection), since (-i)^2 = -1; the time reversal alone
// is the involution.
Driver dual(const Driver& d);

// conj(lambda), -conj(lambda), or -lambda.
Driver reflect(const Driver& d, ReflectAxis axis);

// lambda + a.
Driver translate(const Driver& d, cplx a);

struct LipEstimate {
    double norm = 0.0;
    double s = 0.0, t = 0.0; // witness pair, |lambda(t)-lambda(s)| = norm*sqrt(t-s)
};

// Lower bound on the Holder-1/2 constant from all pairs of a uniform
// grid with `samples` points (endpoints included).
LipEstimate lip_half_norm(const Driver& d, int samples);

} // namespace loewner
