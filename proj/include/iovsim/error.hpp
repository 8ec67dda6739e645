#pragma once

#include <stdexcept>
#include <string>

namespace iovsim {

// Scenario configuration could not be loaded or failed validation.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// File could not be opened, read or written.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace iovsim
