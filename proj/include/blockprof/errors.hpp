#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace blockprof {

/// Base of every error the library raises on bad input. The CLI maps these
/// to exit code 2; anything else is an internal failure.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed configuration or record text.
class ParseError : public Error {
 public:
  using Error::Error;
};

class NotFoundError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// An architecture or record that violates a design-space invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A reduction rule that cannot be applied.
class ConstraintError : public Error {
 public:
  using Error::Error;
};

/// A metric table lookup that has no entry.
class CoverageError : public Error {
 public:
  using Error::Error;
};

/// An evaluator threw while scoring an architecture during search.
class EvaluationError : public Error {
 public:
  EvaluationError(const std::string& what, std::string record)
      : Error(what + " [architecture: " + record + "]"), record_(std::move(record)) {}

  const std::string& record() const noexcept { return record_; }

 private:
  std::string record_;
};

}  // namespace blockprof
