#ifndef DCI_ERRORS_HPP
#define DCI_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace dci {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Caller violated a documented precondition (mismatched grids, theta = 0, ...).
class ContractError : public Error {
public:
    using Error::Error;
};

/// Evaluation produced a non-finite or non-representable value.
class NumericError : public Error {
public:
    using Error::Error;
};

/// Iterative method failed to converge; message carries the trace summary.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

/// A denominator that is provably nonzero for valid inputs vanished,
/// which signals corrupted upstream state rather than a user error.
class SingularError : public Error {
public:
    using Error::Error;
};

} // namespace dci

#endif
