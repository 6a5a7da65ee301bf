#pragma once

#include <stdexcept>
#include <string>

namespace hgamma {

// Invalid parameters or inconsistent configuration (CLI exit code 1).
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

// Argument outside the domain of an operation (CLI exit code 1).
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

// Broken internal invariant (CLI exit code 2).
class InternalError : public std::logic_error {
 public:
  explicit InternalError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace hgamma
