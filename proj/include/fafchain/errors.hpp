#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fafchain {

/// Bad input to a library call (negative alpha, n < 3, odd jump count, ...).
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// An oriented angle fell outside J = [-pi/2, pi/2] where the angle energy is defined.
class DomainViolation : public std::domain_error {
public:
    DomainViolation(std::size_t index, double angle);

    std::size_t index() const noexcept { return index_; }
    double angle() const noexcept { return angle_; }

private:
    std::size_t index_;
    double angle_;
};

/// Scaled energies divide by mu_alpha, which vanishes at alpha = 4.
class ScalingUndefined : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// alpha = 4 is the singular point of the near-critical family; comparisons refuse it.
class SingularPoint : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Exhaustive searches refuse problem sizes past their cost guard.
class CostGuard : public std::length_error {
public:
    using std::length_error::length_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace fafchain
