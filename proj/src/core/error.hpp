#pragma once

#include <stdexcept>
#include <string>

namespace loewner {

enum class Status {
    Ok = 0,
    BadArgument,
    DegenerateC,        // coefficient at a branch point of the parameter map
    OutOfDomain,
    StepUnderflow,      // ODE step shrank below the floor without capture
    NewtonDivergence,
    BranchDiscontinuity, // corrector demanded an argument jump >= pi
    BranchCutHit,
    NoRootOnRay,
    NoSelfHit,
    InconsistentPhase,
    IoError,
    Internal,
};

const char* status_name(Status s);

class Error : public std::runtime_error {
public:
    Error(Status code, const std::string& msg) : std::runtime_error(msg), code_(code) {}
    Status code() const { return code_; }

private:
    Status code_;
};

[[noreturn]] inline void fail(Status code, const std::string& msg) { throw Error(code, msg); }

} // namespace loewner
