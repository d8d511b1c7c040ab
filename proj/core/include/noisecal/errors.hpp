#pragma once

#include <stdexcept>
#include <string>

namespace noisecal {

// Input outside the mathematical domain of an operation (non-positive
// temperature, zero occupation, A_att = 1 in a division, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Caller supplied an inconsistent combination of arguments.
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Base for failures of the inverse procedures.
class FitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SingularFitError : public FitError {
public:
    using FitError::FitError;
};

class EmptyWindowError : public FitError {
public:
    using FitError::FitError;
};

class InsufficientOverlapError : public FitError {
public:
    using FitError::FitError;
};

}  // namespace noisecal
