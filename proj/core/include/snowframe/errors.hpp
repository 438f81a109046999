#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace snowframe {

/// Base class for every error raised by the engine.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text. Line and column are 1-based.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line, int column)
      : Error(what + " (line " + std::to_string(line) + ", column " +
              std::to_string(column) + ")"),
        line_(line),
        column_(column) {}

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

class UnsupportedFeatureError : public Error {
 public:
  UnsupportedFeatureError(const std::string& what, std::size_t feature_index)
      : Error(what), feature_index_(feature_index) {}

  std::size_t feature_index() const noexcept { return feature_index_; }

 private:
  std::size_t feature_index_;
};

class UnsupportedStructureError : public Error {
 public:
  using Error::Error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// A rectangle or window that does not fit the table or image it addresses.
class BoundsError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

}  // namespace snowframe
