#pragma once

#include <stdexcept>
#include <string>

namespace stacksp {

// Base class for all errors raised by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The sink is unreachable from the source once infinite-priced edges are removed.
struct NoPathError : Error {
    using Error::Error;
};

// An enumeration limit was exceeded (path count, support size, assignment count).
struct TooLargeError : Error {
    using Error::Error;
};

// Revenue has no finite maximum: every source-sink path uses a pricable edge.
struct UnboundedError : Error {
    using Error::Error;
};

// Malformed generator parameters.
struct InvalidParamsError : Error {
    using Error::Error;
};

// Malformed input data: parse failures or violated structural invariants.
struct InputError : Error {
    using Error::Error;
};

// A certified inequality failed. This never happens on well-formed inputs and
// indicates an implementation bug; carries the index of the failing item.
struct InequalityViolatedError : Error {
    InequalityViolatedError(const std::string& what, int index)
        : Error(what), failing_index(index) {}
    int failing_index;
};

}  // namespace stacksp
