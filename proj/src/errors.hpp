#pragma once

#include <stdexcept>
#include <string>

namespace axisw {

/// Base of every error raised by the core library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid parameters, malformed configuration, grid mismatch.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Input data violating a structural hypothesis (non-finite samples, wrong parity).
class DataError : public Error {
public:
    using Error::Error;
};

/// Checkpoint header or file layout that does not match the current run.
class IncompatibleError : public Error {
public:
    using Error::Error;
};

/// File could not be opened, written or renamed.
class IoError : public Error {
public:
    using Error::Error;
};

/// A ratio whose denominator vanishes.
class UndefinedError : public Error {
public:
    using Error::Error;
};

/// Requested time step exceeds the advective limit.
class CflViolation : public Error {
public:
    CflViolation(double requested, double advisory)
        : Error("time step " + std::to_string(requested) + " exceeds CFL limit; advisory dt = " +
                std::to_string(advisory)),
          requested_dt(requested),
          advisory_dt(advisory) {}

    double requested_dt;
    double advisory_dt;
};

/// Non-finite values appeared while stepping.
class BlowUp : public Error {
public:
    explicit BlowUp(double t)
        : Error("non-finite values detected at t = " + std::to_string(t)), time(t) {}

    double time;
};

}  // namespace axisw
