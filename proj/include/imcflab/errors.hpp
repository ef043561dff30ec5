#pragma once

#include <stdexcept>
#include <string>

namespace imcflab {

/// Argument outside the domain of an operation (radius out of range, non-unit direction, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Invalid grid, flow or scenario configuration.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// NaN/Inf encountered while evaluating geometry.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Mean curvature is not positive, so the inverse mean curvature flow is undefined.
class FlowSingularityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The surface cannot be written as a radial graph over the chosen origin.
class NotRadialGraphError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DegenerateError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A hypothesis of the monotonicity argument (A <= 1) is violated by the input trace.
class HypothesisViolation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class UsageError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

class NonConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace imcflab
