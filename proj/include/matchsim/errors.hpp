#pragma once

#include <stdexcept>
#include <string>

namespace matchsim {

/// Invalid configuration or input (bad graph spec, illegal patience law, ...).
/// The CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// A sampler exhausted its horizon cap without detecting coalescence.
/// The CLI maps this to exit code 3.
class NonTerminationError : public std::runtime_error {
public:
  explicit NonTerminationError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace matchsim
