#pragma once

#include <stdexcept>
#include <string>

namespace rolekit {

/// Malformed or invalid input (files, flags, argument ranges). CLI exit code 1.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An iterative method failed or refused to converge. CLI exit code 2.
class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A configured resource cap was exceeded (problem size, oracle scale). CLI exit code 3.
class ResourceCapError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace rolekit
