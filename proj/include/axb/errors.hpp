#pragma once

#include <stdexcept>
#include <string>

namespace axb {

// Argument outside the domain of an operation (poles, bad parameters).
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A numerical procedure did not reach its tolerance.  The best value
// found so far travels with the exception.
class NumericError : public std::runtime_error {
public:
    NumericError(const std::string& what, double partial = 0.0, double err = 0.0)
        : std::runtime_error(what), partial_(partial), err_(err) {}
    double partial() const noexcept { return partial_; }
    double error_estimate() const noexcept { return err_; }

private:
    double partial_;
    double err_;
};

// The requested integral does not converge.
class DivergenceError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

}  // namespace axb
