#pragma once

#include <stdexcept>
#include <string>

namespace bellsim {

/// Invalid configuration, usage, or out-of-domain input. CLI exit code 2.
class config_error : public std::runtime_error {
public:
    explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Numerical failure (e.g. a covariance that cannot be factorized). CLI exit code 3.
class numerical_error : public std::runtime_error {
public:
    explicit numerical_error(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace bellsim
