#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace homomorph {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A parameter or configuration value violates its documented precondition.
class InvalidConfig : public Error {
public:
    using Error::Error;
};

/// Two inputs that must agree (lengths, sample intervals) do not.
class ShapeMismatch : public Error {
public:
    using Error::Error;
};

/// The z-transform has a root on the unit circle inside the trusted band,
/// so the continuous phase is undefined there.
class SpectralZeroError : public Error {
public:
    SpectralZeroError(const std::string& what, std::complex<double> root)
        : Error(what), root_(root) {}
    std::complex<double> root() const noexcept { return root_; }

private:
    std::complex<double> root_;
};

/// Iterative root finding stopped before meeting its residual tolerance.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double best_residual)
        : Error(what), best_residual_(best_residual) {}
    double best_residual() const noexcept { return best_residual_; }

private:
    double best_residual_;
};

/// Too few reliable spectral bins for a linear-phase fit.
class InsufficientBand : public Error {
public:
    using Error::Error;
};

}  // namespace homomorph
