#pragma once

#include <stdexcept>
#include <string>

namespace klreg {

// Caller violated a documented precondition (bad input, mixed primes, ...).
struct UsageError : std::runtime_error {
    explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

// The requested quantity cannot be certified at the working precision.
struct PrecisionError : std::runtime_error {
    explicit PrecisionError(const std::string& what) : std::runtime_error(what) {}
};

// A search or enumeration exceeded its configured budget.
struct BudgetError : std::runtime_error {
    explicit BudgetError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace klreg
