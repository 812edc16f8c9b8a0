#pragma once

#include <stdexcept>
#include <string>

namespace mlsbm {

// Caller passed arguments that violate a documented precondition.
class UsageError : public std::runtime_error {
 public:
  explicit UsageError(const std::string& msg) : std::runtime_error(msg) {}
};

// An input file could not be parsed. Messages carry "path:line: reason".
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

// A requested quantity is mathematically undefined for the given data,
// e.g. AUC with an empty positive or negative class.
class UndefinedMetricError : public std::runtime_error {
 public:
  explicit UndefinedMetricError(const std::string& msg) : std::runtime_error(msg) {}
};

// The request exceeds a documented implementation limit (e.g. exhaustive
// permutation matching is only provided for K <= 10).
class CapabilityError : public std::runtime_error {
 public:
  explicit CapabilityError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace mlsbm
