#pragma once

#include <stdexcept>
#include <string>

namespace nctorus {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Operands carry different geometry or flux tags.
class TagMismatchError : public Error {
public:
    using Error::Error;
};

/// Input violates a documented precondition (inadmissible flux, hopping
/// range, malformed matrix sizes, ...).
class InvalidInputError : public Error {
public:
    using Error::Error;
};

/// An eigenvalue sits at the Fermi level, or the gap fell below the floor.
class GapClosedError : public Error {
public:
    GapClosedError(const std::string& what, double eigenvalue)
        : Error(what), eigenvalue_(eigenvalue) {}

    double eigenvalue() const noexcept { return eigenvalue_; }

private:
    double eigenvalue_;
};

/// A quantity that must be real (or vanish) carries a residue above tolerance.
class ResidueError : public Error {
public:
    ResidueError(const std::string& what, double residue)
        : Error(what), residue_(residue) {}

    double residue() const noexcept { return residue_; }

private:
    double residue_;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace nctorus
