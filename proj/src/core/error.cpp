#include "core/error.hpp"

namespace loewner {

const char* status_name(Status s) {
    switch (s) {
        case Status::Ok: return "ok";
        case Status::BadArgument: return "bad-argument";
        case Status::DegenerateC: return "degenerate-coefficient";
        case Status::OutOfDomain: return "out-of-domain";
        case Status::StepUnderflow: return "step-underflow";
        case Status::NewtonDivergence: return "newton-divergence";
        case Status::BranchDiscontinuity: return "branch-discontinuity";
        case Status::BranchCutHit: return "branch-cut-hit";
        case Status::NoRootOnRay: return "no-root-on-ray";
        case Status::NoSelfHit: return "no-self-hit";
        case Status::InconsistentPhase: return "inconsistent-phase";
        case Status::IoError: return "io-error";
        case Status::Internal: return "internal";
    }
    return "unknown";
}

} // namespace loewner
