#pragma once

#include <stdexcept>
#include <string>

namespace ramanforge {

// Base of every error raised by the library. The CLI maps subclasses to exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Argument outside the documented domain of an evaluator.
class DomainError : public Error {
public:
    using Error::Error;
};

// Infinite sum truncated below the order needed for the requested accuracy.
class TruncationError : public Error {
public:
    using Error::Error;
};

// Input for which a quantity is 0/0 or otherwise undefined (e.g. an empty spectrum).
class DegenerateInputError : public Error {
public:
    using Error::Error;
};

// Inconsistent parameters: spacing mismatch, bad counts, invalid geometry.
class ConfigurationError : public Error {
public:
    using Error::Error;
};

// Division by a vanishing detuning or resonance.
class SingularityError : public Error {
public:
    using Error::Error;
};

// File could not be opened, written or parsed at the byte level.
class IoError : public Error {
public:
    using Error::Error;
};

class UnreachableOptimumError : public Error {
public:
    using Error::Error;
};

// ODE step-size collapse. Carries the time and step at failure.
class IntegrationError : public Error {
public:
    IntegrationError(const std::string& what, double time, double step)
        : Error(what), time_(time), step_(step) {}
    double time() const noexcept { return time_; }
    double step() const noexcept { return step_; }

private:
    double time_;
    double step_;
};

class FitError : public Error {
public:
    FitError(const std::string& what, double residual_rms, int iterations)
        : Error(what), residual_rms_(residual_rms), iterations_(iterations) {}
    double residual_rms() const noexcept { return residual_rms_; }
    int iterations() const noexcept { return iterations_; }

private:
    double residual_rms_;
    int iterations_;
};

}  // namespace ramanforge
