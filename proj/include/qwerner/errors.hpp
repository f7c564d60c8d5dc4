#pragma once

#include <stdexcept>
#include <string>

namespace qwerner {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// The requested state vanishes identically (e.g. odd superposition at zero amplitude).
class DegenerateStateError : public Error {
public:
    using Error::Error;
};

/// An exponential factor would overflow; the caller has to work in rescaled form.
class RescaleError : public Error {
public:
    using Error::Error;
};

class ConvergenceError : public Error {
public:
    using Error::Error;
};

/// The flat mixed-part convention has no finite |W| integral for a < 1.
class NonIntegrableConventionError : public Error {
public:
    using Error::Error;
};

class UnsupportedConventionError : public Error {
public:
    using Error::Error;
};

/// Fock truncation too small to hold the state.
class TailMassError : public Error {
public:
    using Error::Error;
};

class AccuracyGuardError : public Error {
public:
    using Error::Error;
};

class InvalidDensityError : public Error {
public:
    using Error::Error;
};

}  // namespace qwerner
