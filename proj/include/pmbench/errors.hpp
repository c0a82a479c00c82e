#pragma once

#include <stdexcept>
#include <string>

namespace pmbench {

// Dataset schema problems: wrong column set, duplicated columns, no header.
struct SchemaError : std::runtime_error {
    explicit SchemaError(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed cell contents (non-numeric sensor value, bad flag digit).
struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

// Value outside its domain (unknown machine type, non-positive kelvin).
struct DomainError : std::runtime_error {
    explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

// Train/test split cannot be formed (class with fewer than 2 members).
struct SplitError : std::runtime_error {
    explicit SplitError(const std::string& msg) : std::runtime_error(msg) {}
};

// Graph-related failures: unknown node names, dangling edge endpoints.
struct GraphError : std::runtime_error {
    explicit GraphError(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical failures: singular design matrix, undefined ratio.
struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad run configuration (empty seed list, unknown pipeline name, ...).
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace pmbench
