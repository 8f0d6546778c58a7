#pragma once

#include <stdexcept>
#include <string>

namespace galaxyml {

// Input table does not match the configured column schema.
class SchemaError : public std::runtime_error {
 public:
  explicit SchemaError(const std::string& message) : std::runtime_error(message) {}
};

// A file or dataset with no usable rows.
class EmptyInputError : public std::runtime_error {
 public:
  explicit EmptyInputError(const std::string& message) : std::runtime_error(message) {}
};

// Non-finite values where finite arithmetic is required.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& message) : std::runtime_error(message) {}
};

}  // namespace galaxyml
