#pragma once

#include <stdexcept>
#include <string>

namespace hbeta {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An argument violates an operation's precondition.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// A likelihood was evaluated outside its parameter support.
class DomainError : public Error {
public:
    using Error::Error;
};

/// An observation lies outside the grid support.
class OutOfSupport : public Error {
public:
    using Error::Error;
};

/// Every candidate of a full conditional has zero weight.
class DegenerateConditional : public Error {
public:
    using Error::Error;
};

/// The logistic MLE does not exist (data separated) or failed to converge.
class SeparationError : public Error {
public:
    using Error::Error;
};

/// An iterative optimizer hit its iteration cap.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

/// Malformed or unreadable input data.
class DataError : public Error {
public:
    using Error::Error;
};

}  // namespace hbeta
