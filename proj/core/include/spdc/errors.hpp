#pragma once

#include <stdexcept>
#include <string>

namespace spdc {

/// Broad failure categories. The CLI maps each one to a distinct exit status.
enum class ErrorCategory {
  config = 2,    // invalid or inconsistent configuration
  domain = 3,    // physics precondition violated (wavelength window, paraxiality, ...)
  resource = 4,  // memory budget, overflow
  io = 5,        // file system, malformed files
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, std::string module, const std::string& message);

  ErrorCategory category() const noexcept { return category_; }
  const std::string& module() const noexcept { return module_; }

 private:
  ErrorCategory category_;
  std::string module_;
};

class ConfigError : public Error {
 public:
  ConfigError(std::string module, const std::string& message)
      : Error(ErrorCategory::config, std::move(module), message) {}
};

class DomainError : public Error {
 public:
  DomainError(std::string module, const std::string& message)
      : Error(ErrorCategory::domain, std::move(module), message) {}
};

class ResourceError : public Error {
 public:
  ResourceError(std::string module, const std::string& message)
      : Error(ErrorCategory::resource, std::move(module), message) {}
};

class IoError : public Error {
 public:
  IoError(std::string module, const std::string& message)
      : Error(ErrorCategory::io, std::move(module), message) {}
};

}  // namespace spdc
