#pragma once

#include <stdexcept>
#include <string>

namespace awopt {

// Dimension/shape mismatch between tensors, layers or action specs.
class ShapeError : public std::runtime_error {
 public:
  explicit ShapeError(const std::string& what) : std::runtime_error(what) {}
};

// Non-finite values encountered mid-computation (loss, gradient, Q value).
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

// API misuse: stepping a finished episode, filtered batch with failures, ...
class UsageError : public std::runtime_error {
 public:
  explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

// Invalid or contradictory configuration.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Sampling from a replay buffer with no eligible transitions.
class EmptyBufferError : public std::runtime_error {
 public:
  explicit EmptyBufferError(const std::string& what) : std::runtime_error(what) {}
};

// Data generation could not produce any episode matching the filter.
class DataGenerationError : public std::runtime_error {
 public:
  explicit DataGenerationError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace awopt
