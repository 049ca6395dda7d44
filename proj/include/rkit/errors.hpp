#pragma once

#include <stdexcept>
#include <string>

namespace rkit {

// Base of everything the library throws on a violated precondition.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Argument outside the admissible set (p < 1, negative values, bad levels...).
class DomainError : public Error {
public:
    using Error::Error;
};

// Grid shape problems: degenerate axis, spacing mismatch, non-uniform CSV.
class GridError : public Error {
public:
    using Error::Error;
};

class UnsupportedGridError : public GridError {
public:
    using GridError::GridError;
};

// Tabulated nonlinearity evaluated outside its table.
class RangeError : public Error {
public:
    using Error::Error;
};

// phi(0) != 0 passed to a quadrature over an unbounded domain.
class ContractError : public Error {
public:
    using Error::Error;
};

// Multiplicity level equal to a sampled value.
class AmbiguousLevelError : public DomainError {
public:
    using DomainError::DomainError;
};

class DivergenceError : public Error {
public:
    DivergenceError(const std::string& what, int last_stable_iteration)
        : Error(what), last_stable_iteration_(last_stable_iteration) {}
    int last_stable_iteration() const noexcept { return last_stable_iteration_; }

private:
    int last_stable_iteration_;
};

// Zero-mass constraint handed to a minimizer that needs positive mass.
class ConstraintError : public DomainError {
public:
    using DomainError::DomainError;
};

// Malformed config / CSV text.
class ParseError : public Error {
public:
    using Error::Error;
};

}  // namespace rkit
