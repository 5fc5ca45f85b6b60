#pragma once

#include <stdexcept>
#include <string>

namespace vague {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

class UnsupportedCharFun : public Error {
 public:
  using Error::Error;
};

/// The operation needs a continuous law (e.g. KS against a lattice law).
class ContinuityRequired : public Error {
 public:
  using Error::Error;
};

class ShapeError : public Error {
 public:
  using Error::Error;
};

class MomentUnavailable : public Error {
 public:
  using Error::Error;
};

class DivisionByZeroConstant : public Error {
 public:
  using Error::Error;
};

class DegenerateSample : public Error {
 public:
  using Error::Error;
};

/// A caller-supplied Jacobian disagrees with finite differences.
class JacobianMismatch : public Error {
 public:
  using Error::Error;
};

}  // namespace vague
