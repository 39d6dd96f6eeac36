#pragma once

#include <stdexcept>
#include <string>

namespace graev {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input: non-square table, negative or non-finite entry, bad JSON shape.
class StructuralError : public Error {
public:
    using Error::Error;
};

/// A pseudometric was required but the space violates an axiom.
class AxiomError : public Error {
public:
    using Error::Error;
};

/// Point index outside the ground space.
class IndexError : public Error {
public:
    using Error::Error;
};

/// Matching limit or combinatorial guard exceeded.
class CapacityError : public Error {
public:
    using Error::Error;
};

/// Operation precondition not met (e.g. element outside the ball).
class PreconditionError : public Error {
public:
    using Error::Error;
};

} // namespace graev
