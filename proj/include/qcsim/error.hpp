#pragma once

#include <stdexcept>
#include <string>

namespace qcsim {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class GridError : public Error { using Error::Error; };
class RoleError : public Error { using Error::Error; };
class RangeError : public Error { using Error::Error; };
class ResolutionError : public Error { using Error::Error; };
class ConfigError : public Error { using Error::Error; };
class NumericalError : public Error { using Error::Error; };
class SizeError : public Error { using Error::Error; };
class CapabilityError : public Error { using Error::Error; };
class UnsupportedError : public Error { using Error::Error; };
class AlignmentError : public Error { using Error::Error; };
class FormatError : public Error { using Error::Error; };

/// Scenario text could not be tokenized; carries the 1-based line number.
class ParseError : public Error {
 public:
  ParseError(int line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// A scenario key failed validation; carries the dotted key name.
class ValidationError : public Error {
 public:
  ValidationError(std::string key, const std::string& what)
      : Error(key + ": " + what), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

}  // namespace qcsim
