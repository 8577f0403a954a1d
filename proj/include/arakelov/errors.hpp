#pragma once

#include <stdexcept>
#include <string>

namespace arakelov {

// Unknown generator, mixed contexts, bad signature.
struct ContextError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct NonIntegralDegree : std::domain_error {
    using std::domain_error::domain_error;
};

struct MalformedClaim : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

// Pole of a special function, or a vanishing factor in a truncated product.
struct SingularityError : std::domain_error {
    using std::domain_error::domain_error;
};

struct ToleranceNotMet : std::runtime_error {
    double bound;
    ToleranceNotMet(const std::string& what, double b) : std::runtime_error(what), bound(b) {}
};

struct ConfigurationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct ShapeMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct SyntaxError : std::runtime_error {
    int line, col;
    SyntaxError(const std::string& msg, int l, int c)
        : std::runtime_error(std::to_string(l) + ":" + std::to_string(c) + ": " + msg), line(l), col(c) {}
};

struct StepUnderflow : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace arakelov
