#pragma once

#include <stdexcept>
#include <string>

namespace lambda_cpt {

// Root of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// An input violates a documented invariant. The message names the invariant.
class ValidationError : public Error {
public:
    using Error::Error;
};

// A Dressed-basis matrix was passed where a Bare-basis one is required (or vice versa).
class BasisMismatch : public Error {
public:
    using Error::Error;
};

// Parameters lie outside the regime in which a closed-form result holds.
class RegimeError : public Error {
public:
    using Error::Error;
};

// The steady state is not unique; callers should use the degenerate path.
class UniquenessViolation : public RegimeError {
public:
    using RegimeError::RegimeError;
};

// Step-size underflow, non-finite state, failed decomposition.
class NumericError : public Error {
public:
    using Error::Error;
};

// Singular values straddle the rank tolerance, so the kernel dimension is ill-defined.
class RankAmbiguity : public NumericError {
public:
    using NumericError::NumericError;
};

} // namespace lambda_cpt
