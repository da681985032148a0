#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace tal {

using Vec3 = std::array<double, 3>;

template <class Real>
using Mat3T = std::array<std::array<Real, 3>, 3>;
using Mat3 = Mat3T<double>;

using NodeIndex = std::uint32_t;
using ElemIndex = std::uint32_t;

// Error types. Everything derives from a std exception so callers that only
// care about "something went wrong" can catch std::exception.

class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DegenerateElementError : public std::runtime_error {
public:
    DegenerateElementError(ElemIndex elem, double volume);
    ElemIndex element() const noexcept { return elem_; }
    double volume() const noexcept { return volume_; }

private:
    ElemIndex elem_;
    double volume_;
};

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& source, std::size_t line, const std::string& what);
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

} // namespace tal
