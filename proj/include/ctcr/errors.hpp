#pragma once

#include <stdexcept>
#include <string>

namespace ctcr {

/// Bad user input: malformed files, invariant violations, unusable topologies.
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

/// A numerical procedure failed to produce a trustworthy answer.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace ctcr
