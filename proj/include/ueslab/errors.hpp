#pragma once

#include <stdexcept>
#include <string>

namespace ueslab {

/// Bad argument: wrong dimension, out-of-range parameter, time before t0.
class ArgumentError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// EsParams failed one of the design conditions of the controller.
class AssemblyError : public ArgumentError {
public:
    using ArgumentError::ArgumentError;
};

/// Operation needs something the map does not provide (e.g. a known optimum).
class CapabilityError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A schedule value left the finite double range.
class OverflowError : public NumericError {
public:
    OverflowError(const std::string& what, double time)
        : NumericError(what), time_(time) {}
    [[nodiscard]] double time() const noexcept { return time_; }

private:
    double time_;
};

/// Sampled data contradicts the growth bounds a cost map is supposed to satisfy.
class AssumptionViolation : public NumericError {
public:
    using NumericError::NumericError;
};

/// Rate fit window lies entirely under the double-precision noise floor.
class WindowTooLate : public NumericError {
public:
    using NumericError::NumericError;
};

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace ueslab
