#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace colmod {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input failed a structural check (Hermiticity, trace, positivity).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A factor label is unknown to the layout, or a cut is malformed.
class LabelError : public Error {
 public:
  using Error::Error;
};

/// Scalar argument outside its mathematical domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

/// The requested joint dimension exceeds the configured memory cap.
class ResourceError : public Error {
 public:
  ResourceError(const std::string& what, std::size_t dimension, std::size_t step)
      : Error(what), dimension_(dimension), step_(step) {}

  std::size_t dimension() const noexcept { return dimension_; }
  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t dimension_;
  std::size_t step_;
};

class UnsupportedProtocolError : public Error {
 public:
  using Error::Error;
};

/// A physical identity or inequality checked at runtime did not hold.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace colmod
