#pragma once

#include <stdexcept>
#include <string>

namespace qlab {

// Argument outside an operation's domain (bad index, non-prime modulus, ...).
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

// Requested size or search exceeds a configured budget.
struct ResourceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Caller broke a documented precondition on the state it handed in.
struct PreconditionError : std::logic_error {
    using std::logic_error::logic_error;
};

// Key material accessed after it vanished.
struct LifecycleError : std::logic_error {
    using std::logic_error::logic_error;
};

// Should be unreachable; signals a bug in the simulator.
struct InternalError : std::logic_error {
    using std::logic_error::logic_error;
};

// Scenario configuration is missing fields or has unknown/malformed ones.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace qlab
