#pragma once

#include <stdexcept>
#include <string>

namespace pseudometric {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A point or path leaves the domain of the potential or of the grid.
class DomainError : public Error {
public:
    using Error::Error;
};

// A seed or closed-form input violates its reality constraints.
class ConstraintError : public Error {
public:
    ConstraintError(const std::string& what, double violation)
        : Error(what), violation_(violation) {}
    double violation() const { return violation_; }

private:
    double violation_;
};

class NumericalError : public Error {
public:
    using Error::Error;
};

// Eigenvectors coalesce; the Hamiltonian is (numerically) not diagonalizable.
class ExceptionalPointError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class UnsupportedError : public Error {
public:
    using Error::Error;
};

} // namespace pseudometric
