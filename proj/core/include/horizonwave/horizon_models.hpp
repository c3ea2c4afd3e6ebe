#pragma once

#include <functional>
#include <string>
#include <vector>

#include "horizonwave/field.hpp"
#include "horizonwave/spatial_operator.hpp"
#include "horizonwave/torus.hpp"

namespace horizonwave {

enum class Sign { Plus, Minus };

/// Model spacetime [0, t_max) x T^n in null-time-function normal form
///
///   g = 2 dt theta + psi(t) theta^2 + gbar,
///
/// where theta is the 1-form dual to the null direction Z (theta(Z) = 1) and
/// gbar is the flat metric on the transversal distribution E = ker(theta).
/// All geometric data are x-independent; psi depends on t only.
struct HorizonModel {
    std::string name;
    SpatialTorus torus;
    /// psi(t) = sum_j psi_series[j] t^j (exact for the built-ins).
    std::vector<double> psi_series;
    std::function<double(double)> psi;
    /// Horizon generator V, scaled so that nabla_V V = kappa V with kappa = 1
    /// whenever the surface gravity is non-zero.
    std::vector<double> generator;
    /// Z on every H_t. Z|_H is a negative multiple of V (Z = -V / 2 here).
    std::vector<double> z_direction;
    /// Orthonormal frame of E (n - 1 vectors).
    std::vector<std::vector<double>> transverse_frame;
    /// gbar expressed as the projector sum_j e_j e_j^T onto E (row-major n x n).
    std::vector<double> gbar;
    /// theta as a covector: g(X, d_t) = theta(X).
    std::vector<double> theta;
    double surface_gravity = 1.0;

    int dims() const { return torus.dims(); }
    bool degenerate() const { return surface_gravity == 0.0; }
    /// sigma(X, Y) = g(X, Y) + g(X, d_t) g(Y, d_t) restricted to H (row-major n x n).
    FlatMetric sigma() const;
    /// psi_series[1], i.e. d_t psi(0).
    double psi_rate() const { return psi_series.size() > 1 ? psi_series[1] : 0.0; }
};

/// Misner spacetime R x S^1 with g = +-2 dt dx + t dx^2.
HorizonModel make_misner(Sign sign, double period, int resolution);

/// R x S^1 x T^q with g = 2 dt dx + t^m dx^2 + sum dy_j^2; zero surface
/// gravity for m >= 2.
HorizonModel make_generalized_misner(int m, int transverse_dims, std::vector<double> periods,
                                     std::vector<int> resolution);

/// Flat R x T^n whose horizon generator points along `v` (dense orbits for
/// irrational directions). psi = t, unit surface gravity.
HorizonModel make_torus_quotient(std::vector<double> v, std::vector<double> periods,
                                 std::vector<int> resolution);

struct NullFormData {
    std::vector<Field> psi_taylor;  // series coefficients of t^j, j = 0..order
    std::vector<double> z_direction;
    std::vector<double> gbar;
    double kappa = 0.0;
};

NullFormData null_form_data(const HorizonModel& model, int taylor_order);

/// Normal form of the d'Alembertian on a built-in model:
///   box = psi d_t^2 + L1(t) d_t + L2(t),
/// with L1 = psi'(t) - 2 d_Z and L2 = -Delta_E. Series coefficients in t.
struct BoxNormalForm {
    std::vector<double> psi;
    std::vector<OperatorMatrix> l1;
    std::vector<OperatorMatrix> l2;
};

BoxNormalForm box_normal_form(const HorizonModel& model);

}  // namespace horizonwave
