#pragma once

#include <stdexcept>
#include <string>

namespace szlab {

// Domain/usage error: bad parameter combinations, malformed inputs. CLI exit 2.
struct InvalidArgument : std::invalid_argument {
    explicit InvalidArgument(const std::string& what) : std::invalid_argument(what) {}
};

// A guarded exhaustive search exceeded its configured budget. CLI exit 3.
struct ResourceLimit : std::runtime_error {
    explicit ResourceLimit(const std::string& what) : std::runtime_error(what) {}
};

// An iteration whose termination rests on an empirical hypothesis (e.g. host-graph
// pseudorandomness) exceeded its configured cap. CLI exit 3.
struct IterationLimit : ResourceLimit {
    explicit IterationLimit(const std::string& what) : ResourceLimit(what) {}
};

// A caller-promised precondition was found false (e.g. a norm lower bound that the
// witness scan refutes). CLI exit 1.
struct PreconditionViolated : std::runtime_error {
    explicit PreconditionViolated(const std::string& what) : std::runtime_error(what) {}
};

// A constructed certificate failed its own verification. Always loud, never
// silently accepted. CLI exit 1; diagnostics ride along.
struct CertificateFailure : std::runtime_error {
    std::string diagnostics;
    CertificateFailure(const std::string& what, std::string diag)
        : std::runtime_error(what), diagnostics(std::move(diag)) {}
};

}  // namespace szlab
