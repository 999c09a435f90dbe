#pragma once

#include <stdexcept>
#include <string>

namespace hsx {

/// Base of every error raised by the library. The exit code is the one the
/// command-line driver reports for this error class.
class Error : public std::runtime_error {
public:
    Error(const std::string& module, const std::string& what)
        : std::runtime_error(module + ": " + what), module_(module) {}

    const std::string& module() const noexcept { return module_; }
    virtual int exit_code() const noexcept { return 2; }

private:
    std::string module_;
};

/// A parameter lies outside the domain where the operation is defined.
class DomainError : public Error {
public:
    using Error::Error;
};

/// An integral identity was requested for parameters where the integral
/// diverges.
class DivergentIntegralError : public DomainError {
public:
    using DomainError::DomainError;
};

/// Evaluation at a pole of a closed-form object.
class SingularityError : public DomainError {
public:
    using DomainError::DomainError;
};

/// A decay fit was requested on data that cannot support it, or a verdict was
/// requested from an inconclusive fit.
class FitDomainError : public DomainError {
public:
    using DomainError::DomainError;
};

/// Results that contradict an invariant the caller relies on.
class InternalConsistencyError : public Error {
public:
    using Error::Error;
};

/// An iterative procedure exhausted its budget.
class ConvergenceError : public Error {
public:
    using Error::Error;
    int exit_code() const noexcept override { return 3; }
};

} // namespace hsx
