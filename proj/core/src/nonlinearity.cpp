#include "horizonwave/nonlinearity.hpp"

#include <cmath>

#include "horizonwave/errors.hpp"

namespace horizonwave {

std::vector<Field> series_multiply(std::span<const Field> a, std::span<const Field> b, int order) {
    if (a.empty() || b.empty()) throw ValidationError("series_multiply needs non-empty series");
    std::vector<Field> out;
    out.reserve(static_cast<std::size_t>(order + 1));
    for (int n = 0; n <= order; ++n) {
        Field acc = Field::zeros(a.front().torus(), a.front().components());
        for (int i = 0; i <= n; ++i) {
            const auto ia = static_cast<std::size_t>(i);
            const auto ib = static_cast<std::size_t>(n - i);
            if (ia < a.size() && ib < b.size() && !a[ia].is_zero() && !b[ib].is_zero()) {
                acc += multiply(a[ia], b[ib]);
            }
        }
        out.push_back(std::move(acc));
    }
    return out;
}

Nonlinearity Nonlinearity::zero() { return {}; }

Nonlinearity Nonlinearity::polynomial(std::vector<double> coeffs) {
    Nonlinearity f;
    while (!coeffs.empty() && coeffs.back() == 0.0) coeffs.pop_back();
    if (coeffs.empty()) return f;
    f.kind_ = Kind::Polynomial;
    f.name_ = "polynomial";
    f.poly_ = std::move(coeffs);
    return f;
}

Nonlinearity Nonlinearity::exp(double scale) {
    return custom("exp", [scale](int, double x) { return scale * std::exp(x); });
}

Nonlinearity Nonlinearity::sin(double scale) {
    return custom("sin", [scale](int j, double x) {
        switch (j % 4) {
            case 0: return scale * std::sin(x);
            case 1: return scale * std::cos(x);
            case 2: return -scale * std::sin(x);
            default: return -scale * std::cos(x);
        }
    });
}

Nonlinearity Nonlinearity::cos(double scale) {
    return custom("cos", [scale](int j, double x) {
        switch (j % 4) {
            case 0: return scale * std::cos(x);
            case 1: return -scale * std::sin(x);
            case 2: return -scale * std::cos(x);
            default: return scale * std::sin(x);
        }
    });
}

Nonlinearity Nonlinearity::custom(std::string name, DerivativeFn derivatives) {
    if (!derivatives) throw ValidationError("custom nonlinearity needs a derivative function");
    Nonlinearity f;
    f.kind_ = Kind::Generic;
    f.name_ = std::move(name);
    f.derivatives_ = std::move(derivatives);
    return f;
}

Field Nonlinearity::apply(const Field& u) const {
    switch (kind_) {
        case Kind::Zero: return Field::zeros(u.torus(), u.components());
        case Kind::Polynomial: {
            // Horner with dealiased products.
            Field acc = Field::constant(u.torus(), poly_.back());
            for (auto it = poly_.rbegin() + 1; it != poly_.rend(); ++it) {
                acc = multiply(acc, u);
                acc += Field::constant(u.torus(), *it);
            }
            return acc;
        }
        case Kind::Generic: {
            const auto& d = derivatives_;
            return apply_pointwise(u, [&d](double x) { return d(0, x); });
        }
    }
    return Field::zeros(u.torus(), u.components());
}

std::vector<Field> Nonlinearity::compose(std::span<const Field> a, int order) const {
    if (order < 0) throw ValidationError("composition order must be >= 0");
    if (static_cast<int>(a.size()) <= order) {
        throw OrderShortfall("nonlinearity composition", order, static_cast<int>(a.size()) - 1);
    }
    const auto& torus = a.front().torus();
    std::vector<Field> out(static_cast<std::size_t>(order + 1), Field::zeros(torus));
    if (kind_ == Kind::Zero) return out;

    if (kind_ == Kind::Polynomial) {
        std::vector<Field> power{Field::constant(torus, 1.0)};
        for (std::size_t j = 0; j < poly_.size(); ++j) {
            if (poly_[j] != 0.0) {
                for (std::size_t n = 0; n < power.size() && n < out.size(); ++n) out[n] += poly_[j] * power[n];
            }
            if (j + 1 < poly_.size()) power = series_multiply(power, a, order);
        }
        return out;
    }

    // f(a) = sum_j f^(j)(a_0) / j! (a - a_0)^j; (a - a_0)^j starts at t^j.
    std::vector<Field> delta(a.begin(), a.begin() + order + 1);
    delta[0] = Field::zeros(torus);
    std::vector<Field> power(static_cast<std::size_t>(order + 1), Field::zeros(torus));
    power[0] = Field::constant(torus, 1.0);
    double factorial = 1.0;
    for (int j = 0; j <= order; ++j) {
        if (j > 0) {
            power = series_multiply(power, delta, order);
            factorial *= j;
        }
        const Field fj = apply_pointwise(a[0], [&](double x) { return derivatives_(j, x); });
        for (int n = j; n <= order; ++n) {
            out[static_cast<std::size_t>(n)] += (1.0 / factorial) * multiply(fj, power[static_cast<std::size_t>(n)]);
        }
    }
    return out;
}

}  // namespace horizonwave
