#pragma once

#include <stdexcept>
#include <string>

namespace numvol {

/// Bad caller input: wrong lengths, unknown catalog names, violated preconditions.
class ArgumentError : public std::invalid_argument {
 public:
  explicit ArgumentError(const std::string& what) : std::invalid_argument(what) {}
};

/// Malformed text input. `line` is 1-based, 0 when not tied to a line.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, int line = 0)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// Data that parses but violates a structural invariant (cone inclusion, definiteness, ...).
class InvariantError : public std::runtime_error {
 public:
  explicit InvariantError(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when a big non-nef class needs a volume oracle the variety does not carry.
class NefOnlyError : public std::runtime_error {
 public:
  explicit NefOnlyError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace numvol
