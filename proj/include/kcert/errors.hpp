#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace kcert {

class DivisionByZero : public std::domain_error {
 public:
  DivisionByZero() : std::domain_error("inversion of zero") {}
};

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed matrix file. Carries the 1-based line number of the offending line.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// A certificate whose shape (vector count, lengths, degrees) does not match
/// what the protocol requested.
class MalformedCertificate : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A serialized transcript that cannot be parsed or replayed.
class TranscriptError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace kcert
