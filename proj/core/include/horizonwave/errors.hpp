#pragma once

#include <stdexcept>
#include <string>

namespace horizonwave {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid arguments or configuration (bad torus, odd resolution, v = 0, ...).
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Taylor data does not reach the order a computation needs.
class OrderShortfall : public Error {
public:
    OrderShortfall(const std::string& what, int needed, int available)
        : Error(what + ": need order " + std::to_string(needed) + ", have " +
                std::to_string(available)),
          needed_(needed),
          available_(available) {}
    int needed() const noexcept { return needed_; }
    int available() const noexcept { return available_; }

private:
    int needed_;
    int available_;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

/// psi(t) fell below the division floor while forming the interior equation.
class DegenerateDivision : public Error {
public:
    explicit DegenerateDivision(double t)
        : Error("psi(t) vanishes at t = " + std::to_string(t)), t_(t) {}
    double t() const noexcept { return t_; }

private:
    double t_;
};

class NonPositiveAlpha : public Error {
public:
    explicit NonPositiveAlpha(double min_alpha)
        : Error("flow quadrature needs min(alpha) > 0, got " + std::to_string(min_alpha)),
          min_alpha_(min_alpha) {}
    double min_alpha() const noexcept { return min_alpha_; }

private:
    double min_alpha_;
};

/// The integrator could not make progress (stiffness beyond the step budget).
class StepSizeUnderflow : public Error {
public:
    StepSizeUnderflow(double t_reached, const std::string& detail)
        : Error("step size underflow at t = " + std::to_string(t_reached) + " (" + detail + ")"),
          t_reached_(t_reached) {}
    double t_reached() const noexcept { return t_reached_; }

private:
    double t_reached_;
};

class NotAdmissible : public Error {
public:
    using Error::Error;
};

class NoConvergence : public Error {
public:
    using Error::Error;
};

class ZeroState : public Error {
public:
    using Error::Error;
};

class NoFiniteConstant : public Error {
public:
    using Error::Error;
};

}  // namespace horizonwave
