#pragma once

#include <stdexcept>
#include <string>

namespace fraclaw {

/// Base class for all domain errors thrown by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class InvalidGrid : public Error {
 public:
  using Error::Error;
};

class GridMismatch : public Error {
 public:
  using Error::Error;
};

/// A negative-order operator or norm was requested on a field with mass.
class NonZeroMean : public Error {
 public:
  using Error::Error;
};

/// Fractional order outside the supported range [-2, 2].
class InvalidOrder : public Error {
 public:
  using Error::Error;
};

class CFLViolation : public Error {
 public:
  using Error::Error;
};

/// Solution blow-up detected during time integration.
class NonFinite : public Error {
 public:
  using Error::Error;
};

/// Residual slices carry nonzero mean: the trajectory broke mass conservation.
class MassDrift : public Error {
 public:
  using Error::Error;
};

class SupportViolation : public Error {
 public:
  using Error::Error;
};

class DegenerateJump : public Error {
 public:
  using Error::Error;
};

class RangeExceeded : public Error {
 public:
  using Error::Error;
};

class NotWeakSolution : public Error {
 public:
  using Error::Error;
};

/// Boundary-layer limit of the extension profile did not converge under
/// grid refinement.
class UnresolvedLayer : public Error {
 public:
  using Error::Error;
};

class TraceMismatch : public Error {
 public:
  using Error::Error;
};

class MassMismatch : public Error {
 public:
  using Error::Error;
};

class NotFromConstant : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class IOError : public Error {
 public:
  using Error::Error;
};

}  // namespace fraclaw
