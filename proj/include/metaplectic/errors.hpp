#pragma once

#include <stdexcept>
#include <string>

namespace metaplectic {

/// Base class for all library errors.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Matrix dimension is not valid (zero, odd, or non-square).
class InvalidDimensionError : public Error {
  public:
    using Error::Error;
};

/// Input violates a precondition (non-symmetric Hamiltonian, hbar mismatch, ...).
class InvalidInputError : public Error {
  public:
    using Error::Error;
};

/// Operation requires a free symplectic matrix (invertible upper-right block).
class NotFreeError : public Error {
  public:
    using Error::Error;
};

/// Maslov index parity inconsistent with the sign of det B.
class MaslovParityError : public Error {
  public:
    using Error::Error;
};

/// No admissible two-free-factor split was found.
class FactorizationError : public Error {
  public:
    using Error::Error;
};

/// Grid too coarse for the chirp content of the requested operator.
class AliasingRiskError : public Error {
  public:
    using Error::Error;
};

/// Gaussian parameter has non-positive real part; the integral diverges.
class DivergentGaussianError : public Error {
  public:
    using Error::Error;
};

/// Hamiltonian has cross position-momentum terms unsupported by the reference solver.
class UnsupportedHamiltonianError : public Error {
  public:
    using Error::Error;
};

/// Hermite recurrence out of its stable range, or grid too small for the state.
class StabilityError : public Error {
  public:
    using Error::Error;
};

/// Lebesgue exponent outside [1, inf].
class InvalidExponentError : public Error {
  public:
    using Error::Error;
};

/// Results are not comparable (grid or time-list mismatch).
class InvalidComparisonError : public Error {
  public:
    using Error::Error;
};

/// File input/output failure.
class IoError : public Error {
  public:
    using Error::Error;
};

}  // namespace metaplectic
