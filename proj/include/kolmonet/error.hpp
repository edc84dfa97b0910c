#pragma once

#include <stdexcept>
#include <string>

namespace kolmonet {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// Networks handed to a depth-aligned operation have different depths.
class DepthMismatch : public Error {
 public:
  using Error::Error;
};

/// Networks handed to an architecture-aligned operation have different architectures.
class ArchMismatch : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class NotSymmetric : public Error {
 public:
  using Error::Error;
};

class NotSpd : public Error {
 public:
  using Error::Error;
};

class UnsupportedKind : public Error {
 public:
  using Error::Error;
};

class ConfigParse : public Error {
 public:
  using Error::Error;
};

class NotMaterializable : public Error {
 public:
  using Error::Error;
};

/// The parameter-count assumption on the approximating families fails at `delta`.
class AssumptionViolated : public Error {
 public:
  AssumptionViolated(const std::string& what, double delta) : Error(what), delta_(delta) {}
  double delta() const noexcept { return delta_; }

 private:
  double delta_;
};

}  // namespace kolmonet
