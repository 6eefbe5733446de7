#pragma once

#include <stdexcept>
#include <string>

namespace exclqa {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Mismatched vector/matrix sizes.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// Invalid argument values (non-symmetric matrices, nonpositive parameters, ...).
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Lattice reduction could not complete (dependent basis, precision or overflow).
class ReductionError : public Error {
public:
    using Error::Error;
};

/// Exact enumeration exceeded its wall-clock budget.
class EnumerationTimeout : public Error {
public:
    using Error::Error;
};

/// The spectrum is fully degenerate; there is no excited level to return.
class NoExcitedStateError : public Error {
public:
    using Error::Error;
};

/// The penalty binary search never left the trivial solution at the upper bracket end.
class BracketExhaustedError : public Error {
public:
    using Error::Error;
};

} // namespace exclqa
