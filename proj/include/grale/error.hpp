#pragma once

#include <stdexcept>
#include <string>

namespace grale {

/// Base of all recoverable data errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed, missing or inconsistent input files.
class IngestError : public Error {
 public:
  using Error::Error;
};

/// A descriptor or rule refers to attributes/values a system does not have.
class SchemaError : public Error {
 public:
  using Error::Error;
};

/// Rule file with an unknown version or a corrupted header.
class RuleFileError : public Error {
 public:
  using Error::Error;
};

/// Precondition failure: the caller passed arguments outside the contract.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace grale
