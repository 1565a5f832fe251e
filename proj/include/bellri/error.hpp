#pragma once

#include <stdexcept>
#include <string>

namespace bellri {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Non-finite entries, wrong shapes, broken symmetry, bad JSON fields.
class MalformedInput : public Error {
public:
    using Error::Error;
};

/// A leading block that had to be inverted is not positive definite.
class DegeneratePivot : public Error {
public:
    using Error::Error;
};

/// Zero-variance data where a Pearson coefficient is required.
class DegenerateData : public Error {
public:
    using Error::Error;
};

/// An operation was called outside its documented domain.
class PreconditionViolated : public Error {
public:
    using Error::Error;
};

/// An objective returned NaN/inf during optimization.
class NonFiniteObjective : public Error {
public:
    using Error::Error;
};

}  // namespace bellri
