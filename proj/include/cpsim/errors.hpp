#pragma once

#include <stdexcept>
#include <string>

namespace cpsim {

// Error taxonomy mirrored by the CLI exit codes:
// config_error -> 2, validation_error -> 3, numeric_error -> 4.
struct config_error : std::runtime_error {
    explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

struct validation_error : std::runtime_error {
    explicit validation_error(const std::string& msg) : std::runtime_error(msg) {}
};

struct numeric_error : std::runtime_error {
    explicit numeric_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace cpsim
