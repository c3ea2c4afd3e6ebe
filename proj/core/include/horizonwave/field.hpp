#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "horizonwave/torus.hpp"

namespace horizonwave {

using Complex = std::complex<double>;

/// Constant Riemannian metric on the torus, row-major n x n. Used to weight
/// frequencies in Sobolev norms; the built-in models all use the identity.
struct FlatMetric {
    std::vector<double> g;

    static FlatMetric identity(int dims);
};

/// Real-valued (or R^d-valued) function on a SpatialTorus, stored as Fourier
/// coefficients c_k with f(x) = sum_k c_k exp(i k~ . x), k~_a = 2 pi k_a / P_a.
///
/// Invariants: c_{-k} = conj(c_k) per component, and every slot touching a
/// Nyquist index is zero.
class Field {
public:
    explicit Field(SpatialTorus torus, int components = 1);

    static Field zeros(const SpatialTorus& torus, int components = 1);
    static Field constant(const SpatialTorus& torus, double value);
    static Field constant_vector(const SpatialTorus& torus, const std::vector<double>& values);
    /// Projects grid samples (same flattening as the spectra) onto the
    /// resolved band.
    static Field from_samples(const SpatialTorus& torus, std::span<const double> samples);
    static Field from_function(const SpatialTorus& torus,
                               const std::function<double(std::span<const double>)>& f);
    static Field from_coefficients(const SpatialTorus& torus, int components,
                                   std::vector<Complex> coeffs);
    static Field from_components(const std::vector<Field>& parts);

    const SpatialTorus& torus() const noexcept { return torus_; }
    int components() const noexcept { return components_; }
    std::size_t modes() const noexcept { return torus_.size(); }

    std::span<const Complex> coeffs(int component = 0) const;
    std::span<Complex> coeffs(int component = 0);
    /// All components back to back (component-major).
    const std::vector<Complex>& data() const noexcept { return data_; }

    Complex coeff(const std::vector<int>& mode, int component = 0) const;
    void set_mode(const std::vector<int>& mode, Complex value, int component = 0);

    Field component(int c) const;
    std::vector<double> samples(int component = 0) const;

    double l2_norm() const;
    double max_abs() const;
    double min_sample() const;
    /// max |c_{-k} - conj(c_k)|; 0 for a well-formed field.
    double hermitian_defect() const;
    /// Re-impose Hermitian symmetry and clear Nyquist slots.
    void symmetrize();
    bool is_zero() const;

    Field& operator+=(const Field& other);
    Field& operator-=(const Field& other);
    Field& operator*=(double s);
    friend Field operator+(Field a, const Field& b) { return a += b; }
    friend Field operator-(Field a, const Field& b) { return a -= b; }
    friend Field operator*(Field a, double s) { return a *= s; }
    friend Field operator*(double s, Field a) { return a *= s; }
    Field operator-() const { return *this * -1.0; }

    /// Multiply every mode of every component by `multiplier(flat_slot)`.
    Field map_modes(const std::function<Complex(std::size_t)>& multiplier) const;

private:
    void check_compatible(const Field& other) const;

    SpatialTorus torus_;
    int components_;
    std::vector<Complex> data_;
};

/// Spectral derivative d^order / dx_axis^order.
Field derivative(const Field& f, int axis, int order = 1);

/// d_V f for the constant vector V = sum v_a d_a.
Field directional_derivative(const Field& f, std::span<const double> v);

/// Pointwise product with 3/2-rule zero padding. A scalar field multiplies
/// every component of a vector field; otherwise component counts must agree.
Field multiply(const Field& f, const Field& g);

/// ||(1 + Delta)^{s/2} f||_{L2(sigma)}, summed over components.
double sobolev_norm(const Field& f, double s, const FlatMetric& sigma);
double sobolev_norm(const Field& f, double s);

/// Apply a scalar function sample-wise (no dealiasing).
Field apply_pointwise(const Field& f, const std::function<double(double)>& fn);

/// Exact translate x -> f(x + shift) of a band-limited field.
Field translate(const Field& f, std::span<const double> shift);

/// Inner product sum over components of integral f g.
double inner_product(const Field& f, const Field& g);

}  // namespace horizonwave
