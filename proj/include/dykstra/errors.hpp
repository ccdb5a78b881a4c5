#pragma once

#include <stdexcept>
#include <string>

namespace dykstra
{

// Wrong arity, wrong variant, malformed input.
class UsageError : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

// A documented precondition of an operation does not hold.
class PreconditionError : public std::logic_error
{
public:
    using std::logic_error::logic_error;
};

// The sets do not meet (or do not meet inside the search window).
class InfeasibleError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// Geometry that has no canonical line-square pose.
class DegenerateError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

class UnsupportedError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// Two routes that must agree by theory disagreed.
class InternalConsistencyError : public std::logic_error
{
public:
    using std::logic_error::logic_error;
};

} // namespace dykstra
