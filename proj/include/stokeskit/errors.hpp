#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace stokeskit {

// Thrown by the expression/JSON parsers; position is a byte offset into the input.
class parse_error : public std::runtime_error {
public:
    parse_error(const std::string& what, std::size_t position)
        : std::runtime_error(what + " (at position " + std::to_string(position) + ")"),
          position_(position) {}

    std::size_t position() const { return position_; }

private:
    std::size_t position_;
};

// Mathematically ill-posed request: pole evaluation at 0, Stokes directions of a
// regular factor, rank > 2 decomposition, non-convergent twist loop, ...
class math_error : public std::runtime_error {
public:
    explicit math_error(const std::string& what) : std::runtime_error(what) {}
};

// A structure failed its consistency checks (triangularity, invertibility, ...).
class validation_error : public std::runtime_error {
public:
    explicit validation_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace stokeskit
