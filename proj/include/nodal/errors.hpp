#pragma once

#include <stdexcept>
#include <string>

namespace nodal {

/// Base class for every failure raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
    explicit InvalidArgument(const std::string& what) : Error("invalid argument: " + what) {}
};

class NotPeriodicError : public Error {
public:
    explicit NotPeriodicError(const std::string& what) : Error("not periodic: " + what) {}
};

class ResolutionError : public Error {
public:
    explicit ResolutionError(const std::string& what) : Error("resolution: " + what) {}
};

class DomainError : public Error {
public:
    explicit DomainError(const std::string& what) : Error("domain: " + what) {}
};

/// The function vanishes where a nonzero normalisation is needed.
class DegenerateFunctionError : public Error {
public:
    explicit DegenerateFunctionError(const std::string& what) : Error("degenerate function: " + what) {}
};

class PositivityViolation : public Error {
public:
    explicit PositivityViolation(const std::string& what) : Error("positivity violation: " + what) {}
};

/// A certificate hypothesis (u(0) = 0, sign change, WSMP precheck, ...) does not hold.
class HypothesisViolation : public Error {
public:
    explicit HypothesisViolation(const std::string& what) : Error("hypothesis violation: " + what) {}
};

}  // namespace nodal
