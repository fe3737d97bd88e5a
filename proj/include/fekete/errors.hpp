#pragma once

#include <stdexcept>
#include <string>

namespace fekete {

// Argument outside the documented domain of an operation.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Integer result does not fit in the return type.
class OverflowError : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

// A node set that does not determine a unique interpolant (or does not span).
class SingularError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& path, int line, const std::string& what)
      : std::runtime_error(path + ":" + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// A triangular array lacks a degree that a re-indexing or analysis needs.
class MissingDegreeError : public std::runtime_error {
 public:
  MissingDegreeError(const std::string& what, int degree)
      : std::runtime_error(what), degree_(degree) {}
  int degree() const { return degree_; }

 private:
  int degree_;
};

}  // namespace fekete
