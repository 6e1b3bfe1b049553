#pragma once

#include <stdexcept>
#include <string>

namespace marten {

// Base class for all toolkit errors. Subclasses map onto CLI exit codes:
// parse 2, numeric/precondition 3, regime 4.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed or inconsistent input documents and flags.
struct ParseError : Error {
    using Error::Error;
};

// A computation failed to meet its numerical contract (residual too large,
// non-monotone table, divergent iteration).
struct NumericError : Error {
    using Error::Error;
};

// The request is well-formed but the problem is outside the regime where the
// quantity exists (no curve crossing, no metastability loss in range).
struct RegimeError : Error {
    using Error::Error;
};

// A documented precondition was violated by the caller.
struct PreconditionError : Error {
    using Error::Error;
};

inline void require(bool cond, const std::string& what) {
    if (!cond) throw PreconditionError(what);
}

} // namespace marten
