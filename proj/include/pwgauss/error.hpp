#pragma once

#include <stdexcept>
#include <string>

namespace pwgauss {

// Argument outside the mathematical domain of a function (x <= 0 for a
// density, alpha <= 0, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// An infinite series did not meet its tolerance within the term budget.
class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// The truncated inverse-transform sampler could not bound its tail mass.
class TruncationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Unreadable or unsupported input file.
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

[[noreturn]] inline void domain_fail(const char* fn, const std::string& what) {
    throw DomainError(std::string(fn) + ": " + what);
}

}  // namespace detail
}  // namespace pwgauss
