#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "horizonwave/field.hpp"
#include "horizonwave/nonlinearity.hpp"
#include "horizonwave/transport_solver.hpp"
#include "horizonwave/wave_operators.hpp"

namespace horizonwave {

/// Source term f(t, x): t-derivatives f_k = d_t^k f|_{t=0} for the horizon
/// recursion and an optional closed form for t > 0. An empty source is f = 0.
struct Source {
    std::vector<Field> jet;
    std::function<Field(double)> closed;

    bool is_zero() const { return jet.empty() && !closed; }
    /// f_k, or zero past the stored jet when the source is identically zero.
    Field jet_at(int k, const SpatialTorus& torus, int components) const;
    /// Closed form if present, else the Taylor polynomial of the jet.
    Field at(double t, const SpatialTorus& torus, int components) const;
};

/// What happened at one order of the recursion A_k u_{k+1} = rhs_k.
struct OrderReport {
    int k = 0;
    std::optional<Obstruction> obstruction;
    std::optional<Obstruction> near_singular;
    double unsolvable_norm = 0.0;
    /// rhs_k reaches a singular mode (non-existence at this order).
    bool cokernel_violation = false;
};

/// Horizon jet (u_0, ..., u_{N+1}) with u_j = d_t^j u|_{t=0}, defining
/// w^N(t) = sum_j u_j t^j / j!.
struct AsymptoticSolution {
    OperatorSpec op;
    int order = 0;
    std::vector<Field> jets;
    std::vector<OrderReport> orders;
    Source source;
    Nonlinearity nonlinearity;

    bool obstructed() const;
    /// Orders whose transport operator has singular modes.
    std::vector<int> obstructed_orders() const;
    /// Orders whose rhs cannot be matched.
    std::vector<int> cokernel_orders() const;
};

/// Tolerance used to call a singular-mode rhs non-zero.
double cokernel_tolerance(const Field& rhs);

AsymptoticSolution linear_asymptotics(const OperatorSpec& op, const Field& u0, const Source& f, int n);

/// P u = f(u): the source jet at order k is composed from u_0..u_k.
AsymptoticSolution semilinear_asymptotics(const OperatorSpec& op, const Nonlinearity& f,
                                          const Field& u0, int n);

/// (w^N(t), d_t w^N(t)).
std::pair<Field, Field> evaluate_jet(const AsymptoticSolution& w, double t);
/// d_t^2 w^N(t).
Field evaluate_jet_second(const AsymptoticSolution& w, double t);

/// ||d_t^k (P w^N - f)|_{t=0}||_{L2} for k = 0..N.
std::vector<double> residual_order_check(const AsymptoticSolution& w);

/// Residual scale max(1, ||u_0||_{2m}).
double residual_scale(const AsymptoticSolution& w, int m = 1);

/// Derivative jets -> power-series coefficients u_j / j!.
std::vector<Field> jets_to_series(std::span<const Field> jets);

}  // namespace horizonwave
