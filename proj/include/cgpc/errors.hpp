#pragma once

#include <stdexcept>
#include <string>

namespace cgpc {

// Problems with user-supplied data: missing/malformed files, bad labels,
// non-numeric cells. Maps to exit code 2 in the CLI.
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& msg) : std::runtime_error(msg) {}
};

// Problems with requested settings: invalid fractions, impossible fold
// counts, out-of-range hyperparameters. Maps to exit code 3 in the CLI.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace cgpc
