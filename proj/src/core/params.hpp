#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "core/error.hpp"

namespace loewner {

using cplx = std::complex<double>;

// Square root on the principal branch with Arg in (-pi, pi].  std::sqrt
// honours IEEE signed zeros, so a negative real number with imaginary
// part -0.0 would land on the wrong side of the cut; normalise the zero
// first so values on the cut are continuous from above.
inline cplx principal_sqrt(cplx w) {
    if (w.imag() == 0.0) w = cplx(w.real(), 0.0);
    return std::sqrt(w);
}

// Parameters of the driver family lambda(t) = c*sqrt(1-t) on [0,1].
// A and B are the roots of W^2 - cW + 4 with A carrying the principal
// square root of c^2 - 16; alpha and beta are the exponents of the
// implicit solution.  Identities: A+B = c, A-B = sqrtDisc, A*B = 4,
// alpha + beta = 1, alpha = B/(B-A).
struct Family1Params {
    cplx c;
    cplx sqrtDisc; // principal sqrt(c^2 - 16)
    cplx A, B;
    cplx alpha, beta;
};

// Parameters of the driver family lambda(t) = c*sqrt(tau+t).
// D and E are the roots of W^2 - cW - 4 (so D*E = -4); delta and epsilon
// mirror alpha and beta: delta(c) = alpha(-ic), D(c) = i*A(-ic).
struct Family2Params {
    cplx c;
    double tau = 0.0;
    cplx sqrtDisc; // principal sqrt(c^2 + 16)
    cplx D, E;
    cplx delta, epsilon;
};

enum class PhaseKind {
    PositiveReAlpha, // hull is a simple arc through the full lifetime
    NegativeReAlpha, // hull closes into a loop and swallows its interior
    Transitional,    // Re(alpha) = 0: upper curve hits back at c before time 1
};

struct Phase {
    PhaseKind kind;
    cplx alpha;     // alpha of the quadrant-folded coefficient
    double imAlpha; // Im(alpha), >= 0 after folding
    // Self-hit time 1 - exp(-4*pi*Im(alpha)); meaningful for Transitional.
    std::optional<double> criticalTime;
};

// Reflection fold of a coefficient into the closed first quadrant.
// The classification formulas assume Arg(c) in [0, pi/2]; every other
// quadrant is its mirror image, so we fold, compute, and map back.
// flipIm conjugates (swaps the upper and lower boundary curves),
// flipRe reflects across the imaginary axis (sides preserved).
struct QuadrantFold {
    bool flipRe = false;
    bool flipIm = false;
    cplx apply(cplx z) const {
        return {flipRe ? -z.real() : z.real(), flipIm ? -z.imag() : z.imag()};
    }
    // The fold is an involution, so mapping back is the same reflection.
    cplx unapply(cplx z) const { return apply(z); }
    bool swapsSides() const { return flipIm; }
    bool identity() const { return !flipRe && !flipIm; }
};

QuadrantFold fold_first_quadrant(cplx c);

// Throws DegenerateC within `tol` of the branch points +-4 (family 1)
// or +-4i (family 2).
Family1Params family1_params(cplx c, double tol = 0.0);
Family2Params family2_params(cplx c, double tau = 0.0, double tol = 0.0);

// Phase of the hull of c*sqrt(1-t), decided by the sign of Re(alpha)
// of the quadrant-folded coefficient.  |Re(alpha)| <= phaseTol counts
// as Transitional.
Phase classify_phase(cplx c, double phaseTol = 1e-10);

struct BoundaryPoint {
    double theta = 0.0; // ray angle
    double r = 0.0;     // |c| on the ray
    cplx c;
    double imAlpha = 0.0;
    double residual = 0.0; // |Re(alpha)| after polishing
};

struct BoundarySweep {
    std::vector<BoundaryPoint> points; // one per ray that crossed the boundary
    int raysTried = 0;
    int raysSkipped = 0;  // rays with no sign change (near the axes)
    double minAbs = 0.0;  // minimal |c| over the polished boundary
    cplx minPoint;        // where the minimum is attained
};

struct BoundaryOptions {
    int rays = 256;           // rays swept over Arg(c) in (0, pi/2)
    double rMin = 0.25;
    double rMax = 16.0;
    double residualTol = 1e-10; // polish |Re(alpha)| below this
};

// Sweeps rays Arg(c) = theta across the open first quadrant and polishes
// the radius where Re(alpha) changes sign.  The boundary leaves the real
// axis at c = 4 and is asymptotic to the ray Arg(c) = pi/4, so rays
// beyond pi/4 are expected to miss; they are skipped and counted.
BoundarySweep phase_boundary(const BoundaryOptions& opt = {});

// Polishes the boundary crossing on the single ray through `direction`.
std::optional<BoundaryPoint> boundary_on_ray(double theta, const BoundaryOptions& opt = {});

} // namespace loewner
