#pragma once

#include <optional>
#include <vector>

#include "horizonwave/field.hpp"
#include "horizonwave/spatial_operator.hpp"
#include "horizonwave/torus.hpp"

namespace horizonwave {

/// Horizon transport problem
///
///   d_v u + (lam + beta / 2) u = rhs            (scalar), or
///   d_v u + shift u = rhs                        (R^d-valued, constant shift)
///
/// on the torus, with v a constant direction.
struct TransportProblem {
    SpatialTorus torus;
    std::vector<double> v;
    double lam = 0.0;
    /// Scalar case only; nullopt means beta = 0. Non-constant beta is allowed.
    std::optional<Field> beta;
    Field rhs;
    /// System case: constant d x d shift, row-major. Empty for scalars.
    std::vector<double> matrix_shift;
};

enum class ObstructionKind { SingularModes, NearSingular };

struct SingularMode {
    std::vector<int> mode;
    /// |multiplier| (scalar) or smallest singular value of the mode block.
    double magnitude = 0.0;
    /// Size of the rhs component that the singular block cannot reach.
    double rhs_magnitude = 0.0;
};

struct Obstruction {
    ObstructionKind kind = ObstructionKind::SingularModes;
    std::vector<SingularMode> modes;
    double threshold = 0.0;
    /// Real basis of the kernel spanned by the singular modes.
    std::vector<Field> kernel_basis;

    /// True if some singular mode carries rhs above `tol` (cokernel violation).
    bool unsolvable(double tol) const;
    /// True if the singular set contains `mode`.
    bool contains(const std::vector<int>& mode) const;
};

struct TransportResult {
    /// Exact solution, or the minimum-norm solution on the complement of the
    /// singular modes when `obstruction` is set.
    Field solution;
    std::optional<Obstruction> obstruction;
    /// Modes within 1e3 * threshold of singular; informational only.
    std::optional<Obstruction> near_singular;
    /// L2 norm of the rhs part lying in the cokernel.
    double unsolvable_norm = 0.0;
    int iterations = 0;
};

/// Default singular threshold 1e-8 (|lam| + 1).
double default_singular_threshold(double lam);

/// Mode-wise division by i v.k + lam + beta / 2. Non-constant beta is handled
/// by fixed-point iteration around its mean (tolerance 1e-12, at most 200
/// sweeps); throws NoConvergence if that iteration stalls.
TransportResult solve_spectral(const TransportProblem& p,
                               std::optional<double> singular_threshold = std::nullopt);

/// Per-mode d x d solve (i v.k I + shift) u(k) = r(k) with minimum-norm
/// least squares on singular blocks.
TransportResult solve_system(const TransportProblem& p,
                             std::optional<double> singular_threshold = std::nullopt);

/// Solve A u = rhs for a first-order horizon operator A (no second-order
/// part). Scalar A may carry a variable multiplier; systems must be constant.
TransportResult solve_transport(const OperatorMatrix& a, const Field& rhs,
                                std::optional<double> singular_threshold = std::nullopt);

struct FlowQuadrature {
    /// Lower integration limit (negative); default -36 / min(alpha).
    std::optional<double> s_cut;
    int panels = 4096;
};

/// u(p) = int_{s_cut}^0 exp(-int_s^0 alpha(p + a v) da) rhs(p + s v) ds on
/// the grid, by composite 8-point Gauss-Legendre panels. Off-grid values come
/// from exact translation of the band-limited fields.
Field solve_flow_quadrature(const SpatialTorus& torus, const std::vector<double>& v,
                            const Field& alpha, const Field& rhs, const FlowQuadrature& quad = {});

}  // namespace horizonwave
