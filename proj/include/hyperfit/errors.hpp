#pragma once

#include <stdexcept>
#include <string>

namespace hyperfit {

// Invalid arguments: dimension mismatches, out-of-range indices, malformed specs.
class ArgumentError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A moment array was asked for a multidegree outside its declared support.
class IncompleteSupportError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Numerical failure (non-finite input, eigen-solver failure).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// The noise-variance equation has no nonnegative real root.
class NoSolutionError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

// Composition with an affine map produced a monomial outside the basis.
class ClosureError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed input files (CSV, JSON).
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace hyperfit
