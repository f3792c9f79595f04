#pragma once

#include <stdexcept>
#include <string>

namespace credit_curves {

/// Bad arguments or malformed input data.
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A solver could not find a spread reproducing the requested price.
class UnattainablePrice : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The survival-curve constraints cannot be met by the data.
class InfeasibleFit : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Evaluation outside the region where a curve is well defined.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

} // namespace credit_curves
