#pragma once

#include <stdexcept>
#include <string>

namespace hqs {

/// Invalid input: bad dimensions, malformed configuration, out-of-range indices.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical procedure did not reach its tolerance (Krylov stepping,
/// Fock truncation, Wigner grid coverage).
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hqs
