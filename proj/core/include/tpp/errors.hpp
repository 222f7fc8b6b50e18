#pragma once

#include <stdexcept>
#include <string>

namespace tpp {

/// Invalid configuration: bad shapes, bad files, unknown config keys.
class ConfigError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// A loss, gradient or parameter stopped being finite during a run.
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace tpp
