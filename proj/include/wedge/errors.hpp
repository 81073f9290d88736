// errors.hpp -- exception taxonomy shared across the library.
//
// The CLI maps these onto process exit codes, so keep the hierarchy flat
// and the types distinguishable by catch clause.
#pragma once

#include <stdexcept>
#include <string>

namespace wedge {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A standing assumption or input invariant is violated.
struct InvalidParams : Error {
    using Error::Error;
};

// Evaluation requested outside the mathematical domain of an operation.
struct OutOfDomain : Error {
    using Error::Error;
};

// The underlying control problem has infinite value for every cost level.
struct IllPosed : Error {
    using Error::Error;
};

// Conditionally well-posed problem queried below its critical round-trip cost.
struct BelowCriticalCost : Error {
    BelowCriticalCost(const std::string& msg, double xi, double xi_bar)
        : Error(msg), xi(xi), xi_bar(xi_bar) {}
    double xi;
    double xi_bar;
};

// An iteration failed to converge or a guard tripped.
struct NumericalFailure : Error {
    using Error::Error;
};

// Portfolio violates the solvency constraint.
struct Insolvent : Error {
    using Error::Error;
};

}  // namespace wedge
