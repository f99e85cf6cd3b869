#ifndef PADIC_SPECTRA_ERRORS_HPP
#define PADIC_SPECTRA_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace padic_spectra {

/// Base of every exception thrown by the library.
class error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: bad literals, out-of-range parameters, shape mismatches.
class validation_error : public error {
public:
  using error::error;
};

/// Two p-adic values built over different primes were combined.
class context_mismatch : public validation_error {
public:
  using validation_error::validation_error;
};

/// A numerical evaluation was refused because the spectral parameter sits
/// too close to a pole of the series (or to 0, their accumulation point).
class guard_violation : public error {
public:
  using error::error;
};

/// A linear system that must be solved is singular (the spectral parameter
/// is an eigenvalue, or the configuration is degenerate).
class singular_system : public error {
public:
  using error::error;
};

/// An iterative procedure (contour count, refinement) could not deliver a
/// trustworthy answer.
class numerical_failure : public error {
public:
  using error::error;
};

} // namespace padic_spectra

#endif // PADIC_SPECTRA_ERRORS_HPP
