#pragma once

#include <stdexcept>
#include <string>

namespace hgm {

/// Invalid hypergeometric datum or parameter supplied by the caller.
class DatumError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A prime that the requested computation cannot handle (bad, or p = 2).
class PrimeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// An internal consistency check failed. Indicates a bug or misclassified input.
class InvariantError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace hgm
