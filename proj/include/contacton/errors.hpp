#pragma once

#include <stdexcept>
#include <string>

namespace contacton {

// All library failures derive from Error so callers can catch one type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class SolverError : public Error {
 public:
  using Error::Error;
};

// Raised by integrators when the state stops being finite.
class BlowUpError : public SolverError {
 public:
  BlowUpError(const std::string& what, double time)
      : SolverError(what), time_(time) {}
  double time() const { return time_; }

 private:
  double time_;
};

}  // namespace contacton
