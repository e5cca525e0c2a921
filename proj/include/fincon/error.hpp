#pragma once

#include <stdexcept>
#include <string>

namespace fincon {

// Base for every error the library throws on bad input or failed
// preconditions. Internal failures (bugs, numerical breakdown) use
// std::runtime_error or std::logic_error directly.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(int line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  int line() const { return line_; }

 private:
  int line_;
};

// Caller violated an operation precondition (edge not in graph, vertex out
// of range, twin pairs present where forbidden, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Problem too large for the configured caps.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace fincon
