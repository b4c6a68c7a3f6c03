#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace esn {

/// Base class for every error thrown by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Matrix or vector dimensions do not match the operation's contract.
class ShapeError : public Error {
public:
    using Error::Error;
};

/// An argument value is outside its valid range (negative step size,
/// empty range, unknown benchmark name, ...).
class ParameterError : public Error {
public:
    using Error::Error;
};

/// Base for failures of numeric procedures.
class NumericError : public Error {
public:
    using Error::Error;
};

/// An iterative solver exhausted its budget; carries the best estimate
/// reached so the caller can still inspect it.
class ConvergenceError : public NumericError {
public:
    ConvergenceError(const std::string& what, double best_estimate)
        : NumericError(what), best_estimate_(best_estimate) {}

    double best_estimate() const noexcept { return best_estimate_; }

private:
    double best_estimate_;
};

/// Cholesky factorization hit a non-positive pivot: the regularized
/// system is singular (or numerically indistinguishable from singular).
class SingularityError : public NumericError {
public:
    using NumericError::NumericError;
};

/// A generated trajectory left the representable range; `step()` is the
/// iteration index at which it happened.
class DivergenceError : public NumericError {
public:
    DivergenceError(const std::string& what, std::size_t step)
        : NumericError(what), step_(step) {}

    std::size_t step() const noexcept { return step_; }

private:
    std::size_t step_;
};

/// Input data is degenerate for the requested operation: a constant
/// dimension under normalization, a zero-variance target, a zero
/// spectral radius, an input shorter than the washout.
class DegenerateInputError : public NumericError {
public:
    using NumericError::NumericError;
};

/// Two reservoir states inside an MMDS window coincide, making the
/// D(i,j) denominator zero. Carries the colliding time indices.
class DegeneratePairError : public NumericError {
public:
    DegeneratePairError(const std::string& what, std::size_t i, std::size_t j)
        : NumericError(what), i_(i), j_(j) {}

    std::size_t first_index() const noexcept { return i_; }
    std::size_t second_index() const noexcept { return j_; }

private:
    std::size_t i_;
    std::size_t j_;
};

/// The operation needs a trained readout but the model has none yet.
class NotTrainedError : public Error {
public:
    using Error::Error;
};

}  // namespace esn
