#pragma once

#include <stdexcept>
#include <string>

namespace tdem {

/// Base class for every error the library raises.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid configuration; `field()` names the offending key or failed check.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& message)
      : Error(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// Permittivity evaluated outside its support or at a non-positive value.
class ProfileError : public Error {
 public:
  using Error::Error;
};

/// A numerical run violated one of its monitored invariants.
class RuntimeFailure : public Error {
 public:
  using Error::Error;
};

/// Reading or writing a file failed.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace tdem
