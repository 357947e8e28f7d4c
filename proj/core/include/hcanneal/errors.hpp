#pragma once

#include <stdexcept>

namespace hcanneal {

// Base class for everything the library throws.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A road quota that cannot be met: density bound exceeded, stride pool
// exhausted, or a planted cycle larger than the quota.
struct InfeasibleError : Error {
    using Error::Error;
};

// Malformed instance file.
struct ParseError : Error {
    using Error::Error;
};

}  // namespace hcanneal
