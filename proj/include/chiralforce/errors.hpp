#pragma once

#include <stdexcept>
#include <string>

namespace chiralforce {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Physically invalid request: mode below cutoff, atom inside the fiber, ...
class PhysicsError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NotGuidedError : public PhysicsError {
public:
    using PhysicsError::PhysicsError;
};

/// Root refinement or quadrature failed to reach its tolerance.
class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class OverflowError : public std::overflow_error {
public:
    using std::overflow_error::overflow_error;
};

}  // namespace chiralforce
