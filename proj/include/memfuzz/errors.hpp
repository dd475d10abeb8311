#pragma once

#include <stdexcept>
#include <string>

namespace memfuzz {

/// Raised when a model, window, circuit, or config document is rejected at
/// construction. The CLI maps this to exit code 2.
class ConfigError : public std::invalid_argument {
public:
    explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace memfuzz
