#pragma once

#include <stdexcept>
#include <string>

namespace s2m {

// Bad input or configuration. The CLI maps this to exit code 2.
class InvalidInput : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Numerical failure caused by the data, e.g. a singular covariance.
class NumericalError : public InvalidInput {
public:
    using InvalidInput::InvalidInput;
};

// Filesystem or stream failure. The CLI maps this to exit code 1.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace s2m
