#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace schwarz {

using Index = std::int32_t;
using Vector = std::vector<double>;

// Real scalars only for now. Transposes go through conj() so a complex
// scalar type can be slotted in without hunting for every adjoint.
inline constexpr double conj(double x) noexcept { return x; }

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class FactorizationError : public Error {
 public:
  FactorizationError(const std::string& what, Index pivot = -1)
      : Error(what), pivot_(pivot) {}
  Index pivot() const noexcept { return pivot_; }

 private:
  Index pivot_;
};

/// Raised when a Cholesky-type factorization meets a non-positive pivot.
class NotPositiveDefinite : public FactorizationError {
 public:
  using FactorizationError::FactorizationError;
};

class CapacityError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace schwarz
