#pragma once

#include <stdexcept>
#include <string>

namespace qoct {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A parameter or configuration value violates a documented invariant.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

class CaseMismatch : public Error {
public:
    using Error::Error;
};

/// Delay step too coarse to resolve the pump-interference fringes.
class NyquistViolation : public Error {
public:
    using Error::Error;
};

class GridMismatch : public Error {
public:
    using Error::Error;
};

class EfficiencyOutOfRange : public Error {
public:
    using Error::Error;
};

class ImaginaryResult : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

/// An iterative or adaptive method stopped before meeting its tolerance.
/// The best available estimate and its error are kept for reporting.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double estimate, double error_estimate)
        : Error(what), estimate_(estimate), error_estimate_(error_estimate) {}

    double estimate() const noexcept { return estimate_; }
    double error_estimate() const noexcept { return error_estimate_; }

private:
    double estimate_;
    double error_estimate_;
};

} // namespace qoct
