#ifndef SAWMAP_ERRORS_HPP
#define SAWMAP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace sawmap {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Empty arrays, size mismatches, non-finite numbers.
class MalformedInputError : public Error {
public:
    using Error::Error;
};

// Argument outside the domain of an operation (x outside [0, r_0],
// parameters outside the admissible region, index out of range).
class DomainError : public Error {
public:
    using Error::Error;
};

// A tabulated map was queried below its deepest breakpoint.
class TruncationError : public DomainError {
public:
    TruncationError(const std::string& what, int needed_depth)
        : DomainError(what), needed_depth_(needed_depth) {}

    int needed_depth() const noexcept { return needed_depth_; }

private:
    int needed_depth_;
};

class PreconditionError : public Error {
public:
    using Error::Error;
};

// Two independent derivations of the same object disagree.
class InternalConsistencyError : public Error {
public:
    using Error::Error;
};

// An iteration that is guaranteed to terminate did not, within its cap.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

} // namespace sawmap

#endif
