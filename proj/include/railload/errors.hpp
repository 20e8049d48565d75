#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace railload {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A caller-supplied value violates an operation's precondition.
class InputError : public Error {
public:
    using Error::Error;
};

/// A file or stream does not follow its documented format.
class FormatError : public Error {
public:
    FormatError(const std::string& what, std::size_t line = 0)
        : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

    /// 1-based line number of the offending row, 0 when not row-specific.
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// The Laplace-domain system matrix is singular at the requested s.
class SingularityError : public Error {
public:
    explicit SingularityError(std::complex<double> s)
        : Error("system is singular at s = " + format(s)), s_(s) {}

    std::complex<double> s() const noexcept { return s_; }

private:
    static std::string format(std::complex<double> s) {
        return "(" + std::to_string(s.real()) + (s.imag() < 0 ? " - " : " + ") +
               std::to_string(std::abs(s.imag())) + "j)";
    }
    std::complex<double> s_;
};

/// Explicit time integration blew up.
class DivergenceError : public Error {
public:
    explicit DivergenceError(double step)
        : Error("time integration diverged with step " + std::to_string(step) + " s"), step_(step) {}

    double step() const noexcept { return step_; }

private:
    double step_;
};

/// Calibration data cannot support a monotone map (e.g. all features equal).
class DegenerateFitError : public Error {
public:
    using Error::Error;
};

}  // namespace railload
