#pragma once

#include <stdexcept>
#include <string>

namespace moat {

/// Invalid configuration or input content; the CLI maps this to exit 2.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& message) : std::runtime_error(message) {}
};

/// Filesystem failure (unreadable input, unwritable output); exit 3.
struct IoError : std::runtime_error {
  explicit IoError(const std::string& message) : std::runtime_error(message) {}
};

}  // namespace moat
