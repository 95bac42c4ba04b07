// Exception types shared by all mtsplit modules.

#ifndef MTSPLIT_ERROR_HPP_
#define MTSPLIT_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace mtsplit {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed text input: word tokens, automorphism/certificate files, scripts.
struct ParseError : Error {
  using Error::Error;
};

/// Operands live over different bases.
struct BasisMismatch : Error {
  using Error::Error;
};

/// An operation needs phi^{-1} but the morphism carries no inverse witness.
struct MissingWitness : Error {
  using Error::Error;
};

/// Structural invariant of a value or certificate violated.
struct InvalidArgument : Error {
  using Error::Error;
};

/// A Tietze move was refused (bad certificate, anchor violation, ...).
struct TietzeError : Error {
  using Error::Error;
};

}  // namespace mtsplit

#endif  // MTSPLIT_ERROR_HPP_
