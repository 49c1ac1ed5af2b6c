#pragma once

#include <stdexcept>
#include <string>

namespace su11 {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Requested space or state does not fit the configured limits.
class CapacityError : public Error {
public:
    using Error::Error;
};

/// Bad arguments: mode indices, label combinations, mismatched spaces.
class DomainError : public Error {
public:
    using Error::Error;
};

class NumericalError : public Error {
public:
    using Error::Error;
};

}  // namespace su11
