#pragma once

#include <stdexcept>
#include <string>

namespace regmc
{

class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// Caller passed arguments that do not fit the operation (length mismatch,
// unsupported size, ...).
class UsageError : public Error
{
public:
    using Error::Error;
};

// An operation was invoked outside its domain, e.g. canonical_valuation on an
// inconsistent matrix.
class PreconditionError : public Error
{
public:
    using Error::Error;
};

// A transition or automaton violates a structural invariant.
class MalformedError : public Error
{
public:
    using Error::Error;
};

} // namespace regmc
