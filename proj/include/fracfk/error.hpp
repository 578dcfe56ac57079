#pragma once

#include <stdexcept>
#include <string>

namespace fracfk {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A parameter violates a documented precondition (range, size, ...).
class ConfigError : public Error {
public:
    ConfigError(const std::string& parameter, const std::string& what)
        : Error(parameter + ": " + what), parameter_(parameter) {}

    const std::string& parameter() const noexcept { return parameter_; }

private:
    std::string parameter_;
};

/// The shift parameter r3 lies outside the interval that keeps H negative definite.
class FeasibilityError : public ConfigError {
public:
    FeasibilityError(double r3, double lo, double hi)
        : ConfigError("r3", "value " + std::to_string(r3) + " outside feasible interval [" +
                                std::to_string(lo) + ", " + std::to_string(hi) + "]"),
          lo_(lo), hi_(hi) {}

    double lo() const noexcept { return lo_; }
    double hi() const noexcept { return hi_; }

private:
    double lo_;
    double hi_;
};

/// A numerical procedure failed (singular system, non-finite values, ...).
class NumericError : public Error {
public:
    using Error::Error;
};

}  // namespace fracfk
