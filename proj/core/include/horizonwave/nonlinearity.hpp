#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "horizonwave/field.hpp"

namespace horizonwave {

/// Scalar nonlinearity f acting pointwise on u, composable with truncated
/// power series in t.
class Nonlinearity {
public:
    /// j-th derivative of f at a point.
    using DerivativeFn = std::function<double(int j, double x)>;

    static Nonlinearity zero();
    /// f(u) = sum_j coeffs[j] u^j (products are dealiased).
    static Nonlinearity polynomial(std::vector<double> coeffs);
    /// f(u) = scale * exp(u), scale * sin(u), scale * cos(u).
    static Nonlinearity exp(double scale = 1.0);
    static Nonlinearity sin(double scale = 1.0);
    static Nonlinearity cos(double scale = 1.0);
    /// Arbitrary smooth f given through its derivatives of every order.
    static Nonlinearity custom(std::string name, DerivativeFn derivatives);

    const std::string& name() const noexcept { return name_; }
    bool is_zero() const noexcept { return kind_ == Kind::Zero; }

    Field apply(const Field& u) const;

    /// Power-series coefficients b_0..b_order of f(sum_j a_j t^j). Needs
    /// a.size() > order; coefficient j only depends on a_0..a_j.
    std::vector<Field> compose(std::span<const Field> a, int order) const;

private:
    enum class Kind { Zero, Polynomial, Generic };

    Kind kind_ = Kind::Zero;
    std::string name_ = "zero";
    std::vector<double> poly_;
    DerivativeFn derivatives_;
};

/// Truncated Cauchy product of two power series with Field coefficients.
std::vector<Field> series_multiply(std::span<const Field> a, std::span<const Field> b, int order);

}  // namespace horizonwave
