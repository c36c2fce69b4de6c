#pragma once

#include <stdexcept>
#include <string>

namespace homsys {

/// Bad input: the caller asked for something outside an operation's domain.
/// Maps to exit code 1 in the CLI.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A numerical procedure could not deliver its contract (exit code 2).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DomainError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class InvalidProfile : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class DegenerateModel : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class StructuralError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class IntegrationFailure : public NumericalError {
public:
    IntegrationFailure(const std::string& what, double partial)
        : NumericalError(what), partial_sum(partial) {}
    double partial_sum;
};

class RegridRequired : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class ScheduleInfeasible : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class InconsistentDensity : public NumericalError {
public:
    using NumericalError::NumericalError;
};

}  // namespace homsys
