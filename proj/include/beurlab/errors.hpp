#pragma once

#include <stdexcept>
#include <string>

namespace beurlab {

/// Base class for all beurlab errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Two fields that must live on the same grid do not.
class GridMismatch : public Error {
public:
    using Error::Error;
};

/// A backend was asked to act on a grid it does not support
/// (spectral needs a periodic grid, quadrature needs a bounded one).
class BackendGridMismatch : public Error {
public:
    using Error::Error;
};

/// A datum that must have vanishing mean (zero Fourier mode) does not.
class NonZeroMean : public Error {
public:
    using Error::Error;
};

/// Lebesgue exponents outside the admissible range or relation.
class ExponentMismatch : public Error {
public:
    using Error::Error;
};

/// Every cube oscillation vanishes: the symbol is constant and there is
/// nothing to certify.
class AllZeroOscillation : public Error {
public:
    using Error::Error;
};

/// A symbol singularity coincides with a sample node.
class SingularSample : public Error {
public:
    using Error::Error;
};

/// Invalid argument to a library operation (bad grid size, bad exponent, ...).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Malformed or inconsistent experiment configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace beurlab
