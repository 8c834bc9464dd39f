#pragma once

#include <stdexcept>
#include <string>

namespace qbs {

// Input rejected by a precondition check. The CLI maps this to exit status 2.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A quadrature or root search failed to meet its tolerance. CLI exit status 3.
class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace qbs
