#pragma once

#include <stdexcept>
#include <string>

namespace hermcalc {

// Bad user input: malformed config file, unknown keys, out-of-range request.
// The CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical sanity violation detected at runtime: quadrature self-check
// failure, mass-retention breach, non-finite values.  CLI exit code 3.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace hermcalc
