#pragma once

#include <stdexcept>
#include <string>

namespace gkmean {

/// Malformed or contract-violating input (CLI exit code 2).
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

/// An iterative numeric procedure failed (CLI exit code 3).
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// A search exhausted its configured budget without deciding.
class ResourceError : public NumericalError {
 public:
  explicit ResourceError(const std::string& what) : NumericalError(what) {}
};

/// The contour passes too close to a zero for the winding count to be trusted.
class ContourTooClose : public NumericalError {
 public:
  explicit ContourTooClose(const std::string& what) : NumericalError(what) {}
};

/// The integrand was non-finite on the contour (a zero sits on it).
class ContourOnZero : public ContourTooClose {
 public:
  explicit ContourOnZero(const std::string& what) : ContourTooClose(what) {}
};

}  // namespace gkmean
