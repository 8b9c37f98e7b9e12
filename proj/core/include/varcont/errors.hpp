#pragma once

#include <stdexcept>
#include <string>

namespace varcont {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A documented precondition was violated by the caller.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class NonAdmissiblePotential : public Error {
 public:
  using Error::Error;
};

/// G is nonpositive on every sampled point.
class HypothesisViolation : public Error {
 public:
  using Error::Error;
};

/// λ lies outside the admissible open interval ]0, λ*[.
class LambdaOutOfRange : public Error {
 public:
  LambdaOutOfRange(const std::string& what, double lambda, double lambda_star)
      : Error(what), lambda_(lambda), lambda_star_(lambda_star) {}
  double lambda() const noexcept { return lambda_; }
  double lambda_star() const noexcept { return lambda_star_; }

 private:
  double lambda_;
  double lambda_star_;
};

class EndpointNotFound : public Error {
 public:
  using Error::Error;
};

class CollapsedToZero : public Error {
 public:
  using Error::Error;
};

class BracketNotFound : public Error {
 public:
  using Error::Error;
};

class NoPositiveSolutionAtZero : public Error {
 public:
  using Error::Error;
};

}  // namespace varcont
