#pragma once

#include <stdexcept>
#include <string>

namespace tenrec {

/// Base class for every error thrown by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class ShapeMismatch : public Error {
 public:
  using Error::Error;
};

/// An inverse transform produced an imaginary residue above tolerance,
/// which signals broken conjugate symmetry upstream.
class NonRealResult : public Error {
 public:
  using Error::Error;
};

class NumericalFailure : public Error {
 public:
  using Error::Error;
};

class InvalidTheta : public Error {
 public:
  using Error::Error;
};

class WeightOrderViolation : public Error {
 public:
  using Error::Error;
};

class PatchTooLarge : public Error {
 public:
  using Error::Error;
};

class NotEnoughPatches : public Error {
 public:
  using Error::Error;
};

class UncoveredPixels : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class FormatError : public Error {
 public:
  using Error::Error;
};

class InconsistentFrameSize : public Error {
 public:
  using Error::Error;
};

class TooSmall : public Error {
 public:
  using Error::Error;
};

class InvalidConfig : public Error {
 public:
  using Error::Error;
};

}  // namespace tenrec
