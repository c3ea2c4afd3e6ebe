#pragma once

#include <optional>
#include <vector>

#include "horizonwave/field.hpp"

namespace horizonwave {

/// Scalar differential operator on the torus that only differentiates along
/// the torus:
///
///   D u = c0 u + drift . grad u + sum_ab second_ab d_a d_b u + m(x) u
///
/// with constant c0, drift, second and an optional variable multiplier m.
struct SpatialOperator {
    double c0 = 0.0;
    std::vector<double> drift;   // length n, empty means zero
    std::vector<double> second;  // n x n row-major, empty means zero
    std::optional<Field> multiplier;

    static SpatialOperator zero() { return {}; }
    static SpatialOperator scalar(double c) { return {c, {}, {}, std::nullopt}; }
    static SpatialOperator transport(double c, std::vector<double> v) {
        return {c, std::move(v), {}, std::nullopt};
    }

    bool has_drift() const;
    bool has_second() const;
    bool is_zero() const;

    /// Constant-coefficient symbol at angular wavenumber k (multiplier excluded).
    Complex symbol(std::span<const double> k) const;

    /// Apply to a single-component field.
    Field apply(const Field& u) const;

    SpatialOperator& operator+=(const SpatialOperator& other);
    SpatialOperator& operator*=(double s);
    friend SpatialOperator operator+(SpatialOperator a, const SpatialOperator& b) { return a += b; }
    friend SpatialOperator operator*(double s, SpatialOperator a) { return a *= s; }
};

/// d x d block of SpatialOperators acting on R^d-valued fields.
class OperatorMatrix {
public:
    OperatorMatrix() = default;
    explicit OperatorMatrix(int d);
    static OperatorMatrix scalar(SpatialOperator op);
    static OperatorMatrix identity(int d, double c = 1.0);

    int dim() const noexcept { return d_; }
    SpatialOperator& at(int row, int col);
    const SpatialOperator& at(int row, int col) const;

    Field apply(const Field& u) const;
    /// d x d symbol matrix (row-major) at angular wavenumber k.
    std::vector<Complex> symbol(std::span<const double> k) const;
    bool has_variable_part() const;
    bool is_zero() const;

    OperatorMatrix& operator+=(const OperatorMatrix& other);
    OperatorMatrix& operator*=(double s);
    friend OperatorMatrix operator+(OperatorMatrix a, const OperatorMatrix& b) { return a += b; }
    friend OperatorMatrix operator*(double s, OperatorMatrix a) { return a *= s; }

private:
    int d_ = 0;
    std::vector<SpatialOperator> entries_;
};

/// Evaluate sum_j coeffs[j] t^j.
OperatorMatrix evaluate_series(const std::vector<OperatorMatrix>& coeffs, double t);
double evaluate_series(const std::vector<double>& coeffs, double t);

}  // namespace horizonwave
