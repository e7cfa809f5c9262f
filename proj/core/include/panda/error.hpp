#pragma once

#include <stdexcept>
#include <string>

namespace panda {

// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller passed an argument outside its documented domain.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Malformed input text: bad JSON, unknown keys or event names, missing fields.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Well-formed input that violates a domain invariant.
class InvariantError : public Error {
 public:
  using Error::Error;
};

// Model misuse: untrained model, missing feature, infeasible query.
class ModelError : public Error {
 public:
  using Error::Error;
};

class VersionMismatchError : public ModelError {
 public:
  using ModelError::ModelError;
};

class CorruptPayloadError : public ModelError {
 public:
  using ModelError::ModelError;
};

}  // namespace panda
