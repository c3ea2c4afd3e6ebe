#pragma once

#include <array>
#include <utility>
#include <vector>

#include "horizonwave/evolution.hpp"
#include "horizonwave/horizon_models.hpp"

namespace horizonwave {

/// The 2m-energy at one time, term by term:
///   [0] ||2 d_Z u - psi u_t||_{2m}^2
///   [1] psi ||gradbar (1 + Delta)^m u||_0^2
///   [2] psi ||u_t||_{2m}^2
///   [3] ||gradbar (1 + Delta)^m u||_0^2
///   [4] ||u||_{2m}^2
/// gradbar is the gradient along the transversal distribution E.
struct EnergyRow {
    double t = 0.0;
    std::array<double, 5> terms{};
    double total = 0.0;
    /// ||u||_{2m+1} + sqrt(t) ||u_t||_{2m}.
    double companion = 0.0;
};

EnergyRow energy(const HorizonModel& model, const EvolutionState& state, int m);

/// ||u||_{2m+1} + sqrt(t) ||u_t||_{2m}.
double companion_norm(const EvolutionState& state, int m);

struct NormEquivalence {
    double ratio_min = 0.0;
    double ratio_max = 0.0;
};

/// Extremes of companion / sqrt(E^{2m}) over the states. Throws ZeroState if
/// some state has zero energy.
NormEquivalence norm_equivalence_check(const HorizonModel& model, const std::vector<EvolutionState>& states,
                                       int m);

struct EnergyFit {
    double d_fit = 0.0;
    /// max over pairs of (lhs - rhs) / rhs at d_fit.
    double max_violation = 0.0;
};

struct EnergyFitOptions {
    double d_min = 0.1;
    double d_max = 50.0;
    int grid = 500;
    /// Relative slack allowed on each inequality.
    double slack = 1e-9;
};

/// Smallest D on a log-spaced grid with
///   N(t1) <= D (t1/t0)^D N(t0) + D t1^D int_{t0}^{t1} ||P u||_{2m} / t^{D+1/2} dt
/// for every sampled pair, N the companion norm. `source` gives P u = f(t)
/// along the run (empty for homogeneous runs). Throws NoFiniteConstant.
EnergyFit fit_energy_constant(const Trajectory& traj, const OperatorSpec& op, int m,
                              const std::vector<std::pair<double, double>>& pairs,
                              const SourceFn& source = {}, const EnergyFitOptions& options = {});

/// All pairs (t_i, t_j), i < j, of `count` log-spaced times across the run.
std::vector<std::pair<double, double>> log_spaced_pairs(const Trajectory& traj, int count);

}  // namespace horizonwave
