#pragma once

#include <stdexcept>

namespace aif {

/// An operation was called at the wrong point of the episode lifecycle.
class InvalidState : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// An experiment configuration is inconsistent; raised before any run starts.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace aif
