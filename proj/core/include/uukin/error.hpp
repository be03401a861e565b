#pragma once

#include <stdexcept>
#include <string>

namespace uukin {

/// Failure categories. The CLI maps these onto its exit codes.
enum class ErrorKind {
  Domain,      // inputs outside an operation's precondition
  Numerical,   // integration or quadrature failed
  Capacity,    // requested problem exceeds the memory budget
  Resolution,  // grid/history too coarse for the requested evaluation
  Io,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(ErrorKind::Domain, what) {}
};

class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what) : Error(ErrorKind::Numerical, what) {}
};

class CapacityError : public Error {
 public:
  explicit CapacityError(const std::string& what) : Error(ErrorKind::Capacity, what) {}
};

class ResolutionError : public Error {
 public:
  explicit ResolutionError(const std::string& what) : Error(ErrorKind::Resolution, what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorKind::Io, what) {}
};

}  // namespace uukin
