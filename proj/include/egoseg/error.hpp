#pragma once

#include <stdexcept>
#include <string>

namespace egoseg {

// Caller passed arguments that violate an operation's preconditions
// (mismatched raster sizes, zero-sized targets, stride 0, ...).
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Configuration file or override is malformed. `field()` names the key.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, std::string message)
      : std::runtime_error(field + ": " + message),
        field_(std::move(field)),
        message_(std::move(message)) {}
  const std::string& field() const noexcept { return field_; }
  const std::string& message() const noexcept { return message_; }

 private:
  std::string field_;
  std::string message_;
};

// File could not be read, decoded or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raster file decoded fine but has the wrong channel count or bit depth.
class FormatError : public IoError {
 public:
  using IoError::IoError;
};

class EmptyPoolError : public std::runtime_error {
 public:
  EmptyPoolError() : std::runtime_error("empty background pool") {}
};

}  // namespace egoseg
