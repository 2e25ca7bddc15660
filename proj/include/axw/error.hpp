#pragma once

#include <stdexcept>
#include <string>

namespace axw {

/// Malformed input text (VOFF header, counts, tokens).
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Structurally invalid complex or function (dangling ids, duplicates, non-finite values).
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Declared and observed number of function components disagree.
class DimensionMismatch : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A function component is constant, so its affine rescale to [0,1] is undefined.
class ConstantComponentError : public std::runtime_error {
public:
    ConstantComponentError(std::size_t component)
        : std::runtime_error("function component " + std::to_string(component) + " is constant"),
          component_(component)
    {
    }

    std::size_t component() const { return component_; }

private:
    std::size_t component_;
};

/// Argument outside an operation's domain (s >= t, non-prime modulus, l_i <= 0, ...).
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

} // namespace axw
