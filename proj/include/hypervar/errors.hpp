#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hypervar {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad user input: malformed files, dimension mismatches, violated preconditions.
class InputError : public Error {
public:
    using Error::Error;
};

/// A numerical procedure could not deliver a result at the requested accuracy.
class NumericalError : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public InputError {
public:
    using InputError::InputError;
};

class ParseError : public InputError {
public:
    ParseError(const std::string& file, std::size_t line, const std::string& what)
        : InputError(file + ":" + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class NotPositiveDefinite : public NumericalError {
public:
    NotPositiveDefinite(std::size_t pivot, double value)
        : NumericalError("matrix is not positive definite: pivot " + std::to_string(pivot) +
                         " = " + std::to_string(value)),
          pivot_(pivot) {}
    std::size_t pivot() const noexcept { return pivot_; }

private:
    std::size_t pivot_;
};

class NoConvergence : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class AllZeroSpectrum : public InputError {
public:
    AllZeroSpectrum() : InputError("every eigenvalue of C^t Gamma1 C is numerically zero") {}
};

class SeriesBudgetExceeded : public NumericalError {
public:
    SeriesBudgetExceeded(std::size_t terms, double bound)
        : NumericalError("chi-square mixture series: remaining mass " + std::to_string(bound) +
                         " after " + std::to_string(terms) + " terms"),
          bound_(bound) {}
    double bound() const noexcept { return bound_; }

private:
    double bound_;
};

class InvalidSignature : public InputError {
public:
    using InputError::InputError;
};

class RadialDecayTooSlow : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class NoSolution : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class BracketOverflow : public NumericalError {
public:
    using NumericalError::NumericalError;
};

}  // namespace hypervar
