#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "horizonwave/field.hpp"
#include "horizonwave/horizon_models.hpp"
#include "horizonwave/spatial_operator.hpp"

namespace horizonwave {

/// Function of x used as a coefficient: constant + optional variable part.
struct Coefficient {
    double constant = 0.0;
    std::optional<Field> variable;

    Coefficient() = default;
    Coefficient(double c) : constant(c) {}  // NOLINT(google-explicit-constructor)
    Coefficient(double c, Field v) : constant(c), variable(std::move(v)) {}

    SpatialOperator as_multiplication() const { return {constant, {}, {}, variable}; }
};

/// First-order part W = w_t(t) d_t + w_spatial . grad of a scalar wave operator.
/// w_t is a power series in t (coefficients of t^j).
struct WaveVectorField {
    std::vector<Coefficient> w_t;
    std::vector<double> w_spatial;
};

/// A wave operator in interior normal form
///
///   P = psi(t) d_t^2 + L1(t) d_t + L2(t),
///
/// with power-series coefficients in t (index j multiplies t^j) and matching
/// closed-form evaluators for t > 0. Scalar operators have components == 1.
struct OperatorSpec {
    std::string label;
    HorizonModel model;
    int components = 1;
    std::vector<double> psi_taylor;
    std::vector<OperatorMatrix> l1_taylor;
    std::vector<OperatorMatrix> l2_taylor;
    /// Highest t-order for which the series are trustworthy; max() for exact
    /// polynomials.
    int taylor_order = std::numeric_limits<int>::max();

    std::function<double(double)> psi;
    std::function<OperatorMatrix(double)> l1;
    std::function<OperatorMatrix(double)> l2;

    /// Scalar case: beta with W|_H - beta d_t tangent to H.
    std::optional<Coefficient> beta;
    /// Zeroth-order endomorphism -(L1_0 - psi_1 I) restricted to H (d x d,
    /// row-major). Positive multiple of B(g(V, .) x .)|_H.
    std::vector<double> b_endo;

    /// Series coefficient j of psi/L1/L2 (zero past the stored length).
    double psi_coeff(std::size_t j) const;
    const OperatorMatrix* l1_coeff(std::size_t j) const;
    const OperatorMatrix* l2_coeff(std::size_t j) const;
};

/// P = box + d_W + alpha on a built-in model; alpha is a power series in t.
OperatorSpec scalar_operator(const HorizonModel& model, const WaveVectorField& w,
                             const std::vector<Coefficient>& alpha);

/// Matrix-valued operator psi d_t^2 + L1 d_t + L2 on R^d-valued fields.
OperatorSpec system_operator(const HorizonModel& model, std::vector<OperatorMatrix> l1_taylor,
                             std::vector<OperatorMatrix> l2_taylor, int d);

/// nabla* nabla on vector fields of Misner+ in the coordinate frame (d_t, d_x).
OperatorSpec tm_connection_laplacian(const HorizonModel& model);

/// Named presets: box, box_plus_one, box_minus_dt, box_minus_dt_plus_one,
/// tm_connection_laplacian, ce26_box_minus_2t_plus_1.
OperatorSpec operator_preset(const HorizonModel& model, const std::string& name);
std::vector<std::string> operator_preset_names();

enum class Verdict { Admissible, NonAdmissible, DegenerateSurfaceGravity };

struct Admissibility {
    Verdict verdict = Verdict::Admissible;
    /// NonAdmissible: grid point and value of the offending beta (scalar) or
    /// the largest eigenvalue of sym(a b_endo) (system).
    std::vector<double> witness_point;
    double witness_value = 0.0;
    std::string detail;

    bool admissible() const { return verdict == Verdict::Admissible; }
};

/// fiber_metric: constant positive-definite d x d metric a (identity if empty).
Admissibility admissibility_check(const OperatorSpec& op,
                                  const std::vector<double>& fiber_metric = {});

std::string to_string(Verdict v);

/// Order-k transport data: A_k u_{k+1} = rhs_k(u_0..u_k, f_k).
struct TransportFamily {
    int k = 0;
    OperatorMatrix a_k;
    std::function<Field(std::span<const Field> jets, const Field& f_k)> rhs;
};

TransportFamily horizon_transport_family(const OperatorSpec& op, int k);

/// d_t^k (P w)|_{t=0} for w = sum_j jets[j] t^j / j! (jets past the end are 0).
Field operator_jet(const OperatorSpec& op, std::span<const Field> jets, int k);

/// Value of d_t^2 u forced by P u = f_ext at time t > 0.
Field interior_apply(const OperatorSpec& op, double t, const Field& u, const Field& ut,
                     const std::optional<Field>& f_ext = std::nullopt);

/// P u evaluated from (u, u_t, u_tt) at time t.
Field apply_operator(const OperatorSpec& op, double t, const Field& u, const Field& ut,
                     const Field& utt);

/// Upper bound on the spectral radius of the first-order system at time t for
/// the resolved modes; drives the 1/psi step-size guard.
double spectral_rate(const OperatorSpec& op, double t);

}  // namespace horizonwave
