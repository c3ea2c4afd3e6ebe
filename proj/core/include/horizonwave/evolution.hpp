#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "horizonwave/asymptotic_engine.hpp"
#include "horizonwave/field.hpp"
#include "horizonwave/nonlinearity.hpp"
#include "horizonwave/wave_operators.hpp"

namespace horizonwave {

struct EvolutionState {
    double t = 0.0;
    Field u;
    Field ut;
};

struct Tolerance {
    double rel = 1e-10;
    double abs = 1e-12;
};

struct IntegratorStats {
    int steps = 0;
    int rejected = 0;
    int rhs_evaluations = 0;
    /// max over accepted steps of h * spectral_rate(t).
    double max_cfl_ratio = 0.0;
};

/// Accepted integration node with the second derivative forced by P u = f.
struct TrajectoryNode {
    double t = 0.0;
    Field u;
    Field ut;
    Field utt;
};

class Trajectory {
public:
    std::vector<TrajectoryNode> nodes;
    std::vector<EvolutionState> snapshots;
    IntegratorStats stats;

    double t_begin() const { return nodes.front().t; }
    double t_end() const { return nodes.back().t; }
    const TrajectoryNode& final_node() const { return nodes.back(); }
    EvolutionState final_state() const;
    std::vector<double> node_times() const;

    /// Dense output: quintic Hermite for u, cubic Hermite for u_t.
    EvolutionState interpolate(double t) const;
};

/// Time-dependent source f(t, .) for t > 0.
using SourceFn = std::function<Field(double)>;

struct EvolveOptions {
    Tolerance tol;
    std::vector<double> snapshot_times;
    /// Step guard h <= c_safe / spectral_rate(t).
    double c_safe = 0.5;
    int max_steps = 2'000'000;
    /// Take exactly these step end points (no error control).
    std::vector<double> replay_steps;
};

/// Dormand-Prince 5(4) on (u, u_t) for psi u_tt + L1 u_t + L2 u = f(t).
Trajectory evolve(const OperatorSpec& op, const SourceFn& f, const EvolutionState& s0, double t_end,
                  const EvolveOptions& options = {});

struct CharacteristicSolution {
    AsymptoticSolution jet;
    Trajectory traj;
};

/// Jet -> seed w^N(tau) -> evolve to t_end. Requires an admissible operator.
CharacteristicSolution characteristic_solve(const OperatorSpec& op, const Field& u0, const Source& f,
                                            int n, double tau, double t_end,
                                            const EvolveOptions& options = {});

struct HorizonLimitRow {
    double tau = 0.0;
    /// ||v_tau(t1) - w^N(t1)||_{2m+1}.
    double deviation = 0.0;
    /// ||v_tau(t1) - v_tau_next(t1)||_{2m+1}; absent on the last row.
    std::optional<double> cauchy_difference;
    IntegratorStats stats;
};

struct HorizonLimitStudy {
    std::vector<HorizonLimitRow> rows;
    /// Samples (t, ||v_tau - w^N||_{2m}) on the smallest-tau trajectory.
    std::vector<std::pair<double, double>> profile;
    /// Least-squares slope of log ||v - w^N||_{2m} against log t.
    double slope = 0.0;
};

struct HorizonLimitOptions {
    EvolveOptions evolve;
    int m = 1;
    double fit_begin = 1e-3;
    double fit_end = 1e-1;
    int fit_samples = 25;
};

/// Solves the Cauchy problems with data w^N(tau) for each tau. The source f
/// enters through its jet only.
HorizonLimitStudy horizon_limit_study(const OperatorSpec& op, const Source& f, const Field& u0, int n,
                                      const std::vector<double>& tau_list, double t1,
                                      const HorizonLimitOptions& options = {});

struct PicardOptions {
    EvolveOptions evolve;
    int m = 1;
    int max_iter = 30;
    double tol = 1e-13;
};

struct PicardResult {
    AsymptoticSolution jet;
    Trajectory traj;
    /// A_k = sup_t ||v_{k+1} - v_k||_{2m} over the integration nodes.
    std::vector<double> increments;
    /// A_{k+1} / A_k.
    std::vector<double> ratios;
    bool converged = false;
    /// max over nodes of ||P v - f(v)||_{L2} for the returned iterate.
    double residual = 0.0;
};

/// v_0 = w^N; v_{k+1} solves P v = f(v_k) with the seed w^N(tau) on [tau, T].
PicardResult picard_iterate(const OperatorSpec& op, const Nonlinearity& f, const Field& u0, int n,
                            double t_final, double tau, const PicardOptions& options = {});

}  // namespace horizonwave
