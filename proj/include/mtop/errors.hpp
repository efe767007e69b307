#pragma once

#include <stdexcept>
#include <string>

namespace mtop {

// Raised when a posterior is queried before it is proper (fewer than two
// observations).
class NotReadyError : public std::logic_error {
  public:
    explicit NotReadyError(const std::string& what) : std::logic_error(what) {}
};

// Raised for an arm index outside [0, K).
class InvalidArmError : public std::out_of_range {
  public:
    explicit InvalidArmError(const std::string& what) : std::out_of_range(what) {}
};

// Raised for malformed or inconsistent configuration (files or parameters).
class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace mtop
