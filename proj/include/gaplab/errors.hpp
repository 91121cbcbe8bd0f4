#pragma once

#include <stdexcept>
#include <string>

namespace gaplab {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

/// Step size fell below the floor; `where` is the abscissa of the failure.
class StiffnessError : public Error {
 public:
  StiffnessError(const std::string& what, double where) : Error(what), where_(where) {}
  double where() const noexcept { return where_; }

 private:
  double where_;
};

class SearchFailure : public Error {
 public:
  using Error::Error;
};

class PrecisionError : public Error {
 public:
  PrecisionError(const std::string& what, double achieved_width)
      : Error(what), achieved_width_(achieved_width) {}
  double achieved_width() const noexcept { return achieved_width_; }

 private:
  double achieved_width_;
};

class StructureViolation : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

}  // namespace gaplab
