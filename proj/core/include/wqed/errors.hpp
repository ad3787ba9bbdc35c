#pragma once

#include <stdexcept>
#include <string>

namespace wqed {

// Invalid physical or numerical input. Raised before any computation runs.
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A computation that cannot produce a trustworthy number.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Excited-state amplitude vanishes, so ratios like psi_dot/psi are undefined.
class SingularPointError : public NumericalError {
public:
    SingularPointError(const std::string& what, double t) : NumericalError(what), t_(t) {}
    double time() const noexcept { return t_; }

private:
    double t_;
};

// Spatial integration window does not contain the packet.
class WindowError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

// Discretized bath asked to run past half its recurrence time.
class RecurrenceError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

// Explicit integrator step too large, or a conservation monitor tripped.
class StabilityError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

} // namespace wqed
