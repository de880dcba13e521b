#pragma once

#include <stdexcept>
#include <string>

namespace backhaul {

/// Raised when an argument violates a documented precondition.
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when a planning problem has no solution under the given settings.
class Infeasible : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace backhaul
