#pragma once

#include <stdexcept>
#include <string>

namespace phasecrb {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    virtual const char* kind() const noexcept { return "error"; }
};

/// Invalid parameters or violated preconditions.
class DomainError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "domain_error"; }
};

/// Quadrature, root finding or optimisation did not reach the requested accuracy.
class ConvergenceError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "convergence_error"; }
};

/// A spectrum violates positivity or the spectral uncertainty relation.
class PhysicalityError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "physicality_error"; }
};

/// Configuration document problems; `field()` is a dotted path into the document.
class ConfigError : public Error {
public:
    ConfigError(std::string field, const std::string& message)
        : Error(field + ": " + message), field_(std::move(field)) {}
    const char* kind() const noexcept override { return "config_error"; }
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

} // namespace phasecrb
