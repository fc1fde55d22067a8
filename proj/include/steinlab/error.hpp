#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace steinlab {

/// A parameter lies outside the domain of the law or formula it was passed to.
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Malformed distribution spec text. `position()` is the byte offset of the
/// offending character.
class SpecSyntaxError : public std::invalid_argument {
public:
    SpecSyntaxError(const std::string& detail, std::size_t position)
        : std::invalid_argument(detail + " at position " + std::to_string(position)),
          position_(position) {}

    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

/// A numerical routine could not reach its target accuracy or ran out of
/// resources (iteration cap, table size).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace steinlab
