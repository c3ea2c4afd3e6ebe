#include "horizonwave/horizon_integral.hpp"

#include <cmath>
#include <numbers>

#include "horizonwave/errors.hpp"

namespace horizonwave {

Field remark22_first_derivative(const Field& u0, const HorizonIntegralQuadrature& quad) {
    const auto& torus = u0.torus();
    if (torus.dims() != 1 || u0.components() != 1) {
        throw ValidationError("the horizon integral oracle is defined for scalar data on S^1");
    }
    if (!(quad.s_cut < 0.0) || quad.panels < 1) throw ValidationError("invalid quadrature budget");

    // 5-point Gauss-Legendre on [-1, 1].
    const double r = 2.0 * std::sqrt(10.0 / 7.0);
    const double x1 = std::sqrt(5.0 - r) / 3.0;
    const double x2 = std::sqrt(5.0 + r) / 3.0;
    const double w1 = (322.0 + 13.0 * std::sqrt(70.0)) / 900.0;
    const double w2 = (322.0 - 13.0 * std::sqrt(70.0)) / 900.0;
    const double nodes[5] = {-x2, -x1, 0.0, x1, x2};
    const double weights[5] = {w2, w1, 128.0 / 225.0, w1, w2};

    const int n = torus.resolution()[0];
    const double period = torus.periods()[0];
    const auto c = u0.coeffs();
    // Non-zero modes with their angular wavenumbers.
    std::vector<double> kk;
    std::vector<Complex> ck;
    for (int slot = 0; slot < n; ++slot) {
        if (c[static_cast<std::size_t>(slot)] == Complex{}) continue;
        const int k = slot <= n / 2 ? slot : slot - n;
        kk.push_back(2.0 * std::numbers::pi * k / period);
        ck.push_back(c[static_cast<std::size_t>(slot)]);
    }

    std::vector<Complex> basis(static_cast<std::size_t>(n) * kk.size());
    for (int j = 0; j < n; ++j)
        for (std::size_t m = 0; m < kk.size(); ++m)
            basis[static_cast<std::size_t>(j) * kk.size() + m] = std::polar(1.0, kk[m] * period * j / n);

    std::vector<double> out(static_cast<std::size_t>(n), 0.0);
    const double h = -quad.s_cut / quad.panels;
    std::vector<Complex> weighted(kk.size());
    for (int p = 0; p < quad.panels; ++p) {
        const double left = quad.s_cut + p * h;
        for (int q = 0; q < 5; ++q) {
            const double s = left + 0.5 * h * (nodes[q] + 1.0);
            const double w = 0.5 * h * weights[q] * std::exp(s);
            // u0(x - 2s) = sum_k c_k e^{ik x} e^{-2iks}
            for (std::size_t m = 0; m < kk.size(); ++m) weighted[m] = w * ck[m] * std::polar(1.0, -2.0 * kk[m] * s);
            for (int j = 0; j < n; ++j) {
                const Complex* row = &basis[static_cast<std::size_t>(j) * kk.size()];
                double acc = 0.0;
                for (std::size_t m = 0; m < kk.size(); ++m) acc += (weighted[m] * row[m]).real();
                out[static_cast<std::size_t>(j)] += acc;
            }
        }
    }
    for (auto& v : out) v = -v;
    return Field::from_samples(torus, out);
}

}  // namespace horizonwave
