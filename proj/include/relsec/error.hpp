#pragma once

#include <stdexcept>
#include <string>

namespace relsec {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// No element structure could be recovered from the input bytes.
class UnparseableInput : public Error {
 public:
  using Error::Error;
};

// Neither an exception line nor a single `at ...(...)` frame was found.
class NoTraceFound : public Error {
 public:
  using Error::Error;
};

class MissingBody : public Error {
 public:
  using Error::Error;
};

class CorpusLayoutError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace relsec
