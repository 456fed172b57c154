#ifndef MOMENTBOUNDS_ERRORS_HPP
#define MOMENTBOUNDS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace momentbounds {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    virtual int exit_code() const noexcept { return 1; }
};

// Bad input or precondition violation.
class ConfigError : public Error {
public:
    using Error::Error;
    int exit_code() const noexcept override { return 2; }
};

// Factorization, eigen-solver, integration or LP failure.
class NumericalError : public Error {
public:
    using Error::Error;
    int exit_code() const noexcept override { return 3; }
};

// A cutting-plane probe hit its budget without a verdict.
class IndeterminateVerdict : public NumericalError {
public:
    IndeterminateVerdict(double at, const std::string& what)
        : NumericalError(what), at_(at) {}
    double at() const noexcept { return at_; }

private:
    double at_;
};

// A mathematical property that must hold was observed not to hold.
class InvariantViolation : public Error {
public:
    using Error::Error;
    int exit_code() const noexcept override { return 4; }
};

} // namespace momentbounds

#endif
