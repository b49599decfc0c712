#pragma once

#include <stdexcept>
#include <string>

namespace qpc {

// Input violates an operation's precondition (unknown seed, bad index, odd
// half-length for the dual step, ...).
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Two computation routes disagree, or a transform produced a non-integral
// result.
class ConsistencyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Requested enumeration exceeds the configured budget.
class BudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace qpc
