#pragma once

#include <stdexcept>
#include <string>

namespace polx {

/// Invalid input or configuration (bad sizes, unsupported kinds, unknown keys).
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A computation could not reach its tolerance (step underflow, no crossing, ...).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace polx
