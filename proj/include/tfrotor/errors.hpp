#pragma once

#include <stdexcept>
#include <string>

namespace tfrotor {

/// Precondition violated by a caller-supplied argument.
class InvalidArgument : public std::invalid_argument {
 public:
  explicit InvalidArgument(const std::string& what) : std::invalid_argument(what) {}
};

/// A test-signal descriptor whose mass leaks out of the sampled domain.
class SupportViolation : public std::runtime_error {
 public:
  explicit SupportViolation(const std::string& what) : std::runtime_error(what) {}
};

/// Input or output of a quadratic Fourier transform carries mass near the domain edge.
class TailViolation : public std::runtime_error {
 public:
  explicit TailViolation(const std::string& what) : std::runtime_error(what) {}
};

/// The upper-right block of a symplectic matrix (or the L block of a
/// generating function) is numerically singular.
class SingularBlock : public std::runtime_error {
 public:
  explicit SingularBlock(const std::string& what) : std::runtime_error(what) {}
};

class FactorizationFailed : public std::runtime_error {
 public:
  explicit FactorizationFailed(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed signal file.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace tfrotor
