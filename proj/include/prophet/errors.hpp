#pragma once

#include <stdexcept>
#include <string>

namespace prophet {

// A numeric routine could not meet its accuracy contract (quadrature
// tolerance miss, root bracket failure). The message carries the achieved
// bound so callers can report it.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

// An input document could not be parsed into a valid instance or rule.
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// The exact engine does not support the requested instance/rule pair
// (continuous support where finite support is required, or an atom sitting
// exactly on a deterministic threshold in the closed-form evaluator).
class UnsupportedExactError : public std::runtime_error {
public:
    explicit UnsupportedExactError(const std::string& what) : std::runtime_error(what) {}
};

// The enumeration outcome space exceeds the configured guardrail.
class EnumerationLimitError : public std::runtime_error {
public:
    explicit EnumerationLimitError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace prophet
