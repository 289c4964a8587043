#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qmim {

/// Base class for every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad arguments: empty or out-of-range subsystem sets, unknown tags, wrong arity.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// The input is not a physical state (normalization, Hermiticity, positivity).
class InvalidStateError : public Error {
 public:
  using Error::Error;
};

/// A computed quantity left its admissible range beyond tolerance.
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

/// The exact classifier only accepts n <= 3.
class UnsupportedArityError : public ArgumentError {
 public:
  using ArgumentError::ArgumentError;
};

/// Malformed JSON or schema violation. `position` is a byte offset when known.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position = npos)
      : Error(position == npos ? what : what + " (at byte " + std::to_string(position) + ")"),
        position_(position) {}

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

}  // namespace qmim
