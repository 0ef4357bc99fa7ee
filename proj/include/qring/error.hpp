#pragma once

#include <stdexcept>
#include <string>

namespace qring {

/// Base class for every failure raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the domain of a function (pole, singular point, bad parameter).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Series or iteration did not converge within its budget.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

/// A basis denominator D = -k + e_shift/(4b) + s - 1/2 vanished at the requested energy.
class DegenerateDenominator : public Error {
public:
    using Error::Error;
};

/// The matching determinant has an imaginary part beyond round-off.
class ImaginaryDetTooLarge : public Error {
public:
    using Error::Error;
};

/// More than one null direction at a refined root.
class RankDeficiencyAmbiguous : public Error {
public:
    using Error::Error;
};

class MaxIterations : public Error {
public:
    using Error::Error;
};

/// Invalid user configuration (file or flags).
class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace qring
