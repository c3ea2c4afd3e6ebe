#pragma once

#include <cmath>
#include <numbers>
#include <random>

#include "horizonwave/field.hpp"
#include "horizonwave/torus.hpp"

namespace hw_test {

using horizonwave::Complex;
using horizonwave::Field;
using horizonwave::SpatialTorus;

inline constexpr double kPi = std::numbers::pi;
inline const double kGolden = (std::sqrt(5.0) - 1.0) / 2.0;

/// Real field with random coefficients on modes |k_a| <= band.
inline Field random_field(const SpatialTorus& torus, unsigned seed, int band = 4, double amplitude = 1.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, amplitude);
    Field f = Field::zeros(torus);
    auto c = f.coeffs();
    for (std::size_t i = 0; i < torus.size(); ++i) {
        if (torus.touches_nyquist(i)) continue;
        const auto mode = torus.mode_vector(i);
        bool inside = true;
        for (int k : mode) inside = inside && std::abs(k) <= band;
        if (inside) c[i] = Complex{normal(rng), normal(rng)};
    }
    f.symmetrize();
    return f;
}

/// Random band-limited u0 >= 0: |g|^2 plus a shift keeps it non-negative.
inline Field random_nonnegative(const SpatialTorus& torus, unsigned seed, int band = 3) {
    Field g = random_field(torus, seed, band);
    Field sq = horizonwave::multiply(g, g);
    return sq + Field::constant(torus, 0.1);
}

inline double max_diff(const Field& a, const Field& b) { return (a - b).max_abs(); }

inline Field trig(const SpatialTorus& torus, double (*fn)(double), double k = 1.0, double scale = 1.0) {
    return Field::from_function(torus, [=](std::span<const double> x) { return scale * fn(k * x[0]); });
}

inline Field cos_x(const SpatialTorus& torus) {
    return trig(torus, [](double x) { return std::cos(x); });
}
inline Field sin_x(const SpatialTorus& torus) {
    return trig(torus, [](double x) { return std::sin(x); });
}

}  // namespace hw_test
