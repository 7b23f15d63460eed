#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace afslab {

using NodeId = int;

// Slack used by every feasibility comparison so that knife-edge arithmetic
// (fuel exactly 0, gap exactly equal to the range) does not flap.
inline constexpr double kFeasEps = 1e-9;

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed input text (network files, probability files, LP files, config).
struct ParseError : Error {
    enum class Kind {
        BadHeader,
        BadRow,
        UnknownNode,
        SelfLoop,
        DuplicateLink,
        NonpositiveDistance,
        Disconnected,
        LinkCountMismatch,
        BadFormat,
    };
    ParseError(Kind k, const std::string& msg) : Error(msg), kind(k) {}
    Kind kind;
};

// A structurally valid input that violates a domain contract.
struct ValidationError : Error {
    using Error::Error;
};

// A guard tripped: the request is well-formed but outside what the
// implementation is willing to attempt (e.g. brute force on a large set).
struct GuardError : Error {
    using Error::Error;
};

// Shortest decimal string that parses back to exactly the same double.
std::string fmt_double(double v);

}  // namespace afslab
