#include "horizonwave/energy.hpp"

#include <algorithm>
#include <cmath>

#include "horizonwave/errors.hpp"

namespace horizonwave {
namespace {

// ||gradbar (1 + Delta)^m u||_0^2 over all components.
double transversal_term(const HorizonModel& model, const Field& u, int m) {
    const auto& torus = u.torus();
    const int n = torus.dims();
    double sum = 0.0;
    std::vector<double> k(static_cast<std::size_t>(n));
    for (std::size_t flat = 0; flat < torus.size(); ++flat) {
        const auto slots = torus.unflatten(flat);
        double k2 = 0.0;
        for (int a = 0; a < n; ++a) {
            k[static_cast<std::size_t>(a)] = torus.wavenumber(a, slots[a]);
            k2 += k[static_cast<std::size_t>(a)] * k[static_cast<std::size_t>(a)];
        }
        double q = 0.0;
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                q += model.gbar[static_cast<std::size_t>(a * n + b)] * k[static_cast<std::size_t>(a)] *
                     k[static_cast<std::size_t>(b)];
        if (q == 0.0) continue;
        const double weight = q * std::pow(1.0 + k2, 2.0 * m);
        for (int c = 0; c < u.components(); ++c) sum += weight * std::norm(u.coeffs(c)[flat]);
    }
    return sum * torus.volume();
}

double source_integral(const Trajectory& traj, const SourceFn& source, int m, double t0, double t1,
                       double d) {
    if (!source) return 0.0;
    std::vector<double> grid{t0};
    for (const auto& node : traj.nodes)
        if (node.t > t0 && node.t < t1) grid.push_back(node.t);
    grid.push_back(t1);
    // Refine the first interval 4x, where t^{-D-1/2} varies fastest.
    std::vector<double> refined{grid[0]};
    for (int i = 1; i <= 4; ++i) refined.push_back(grid[0] + (grid[1] - grid[0]) * i / 4.0);
    refined.insert(refined.end(), grid.begin() + 2, grid.end());
    double total = 0.0;
    double prev = sobolev_norm(source(refined[0]), 2.0 * m) / std::pow(refined[0], d + 0.5);
    for (std::size_t i = 1; i < refined.size(); ++i) {
        const double cur = sobolev_norm(source(refined[i]), 2.0 * m) / std::pow(refined[i], d + 0.5);
        total += 0.5 * (refined[i] - refined[i - 1]) * (prev + cur);
        prev = cur;
    }
    return total;
}

}  // namespace

double companion_norm(const EvolutionState& state, int m) {
    return sobolev_norm(state.u, 2.0 * m + 1.0) + std::sqrt(state.t) * sobolev_norm(state.ut, 2.0 * m);
}

EnergyRow energy(const HorizonModel& model, const EvolutionState& state, int m) {
    if (!(state.t > 0.0)) throw ValidationError("energy needs t > 0");
    const double psi = model.psi(state.t);
    const double s = 2.0 * m;
    EnergyRow row;
    row.t = state.t;
    const Field dz = directional_derivative(state.u, model.z_direction);
    const double t1 = sobolev_norm(2.0 * dz - psi * state.ut, s);
    const double grad = transversal_term(model, state.u, m);
    const double ut_norm = sobolev_norm(state.ut, s);
    const double u_norm = sobolev_norm(state.u, s);
    row.terms = {t1 * t1, psi * grad, psi * ut_norm * ut_norm, grad, u_norm * u_norm};
    for (double term : row.terms) row.total += term;
    row.companion = companion_norm(state, m);
    return row;
}

NormEquivalence norm_equivalence_check(const HorizonModel& model, const std::vector<EvolutionState>& states,
                                       int m) {
    if (states.empty()) throw ValidationError("norm_equivalence_check needs states");
    NormEquivalence out{INFINITY, 0.0};
    for (const auto& st : states) {
        const auto row = energy(model, st, m);
        if (!(row.total > 0.0)) throw ZeroState("state at t = " + std::to_string(st.t) + " has zero energy");
        const double ratio = row.companion / std::sqrt(row.total);
        out.ratio_min = std::min(out.ratio_min, ratio);
        out.ratio_max = std::max(out.ratio_max, ratio);
    }
    return out;
}

std::vector<std::pair<double, double>> log_spaced_pairs(const Trajectory& traj, int count) {
    if (count < 2) throw ValidationError("need at least two sample times");
    const double lo = traj.t_begin();
    const double hi = traj.t_end();
    std::vector<double> times;
    for (int i = 0; i < count; ++i) times.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (count - 1)));
    times.back() = hi;
    std::vector<std::pair<double, double>> pairs;
    for (int i = 0; i < count; ++i)
        for (int j = i + 1; j < count; ++j) pairs.emplace_back(times[static_cast<std::size_t>(i)],
                                                               times[static_cast<std::size_t>(j)]);
    return pairs;
}

EnergyFit fit_energy_constant(const Trajectory& traj, const OperatorSpec& op, int m,
                              const std::vector<std::pair<double, double>>& pairs, const SourceFn& source,
                              const EnergyFitOptions& options) {
    if (traj.nodes.empty() || traj.nodes.front().u.components() != op.components) {
        throw DimensionMismatch("trajectory does not match the operator");
    }
    if (pairs.empty()) throw ValidationError("fit_energy_constant needs (t0, t1) pairs");
    if (options.grid < 2 || !(options.d_min > 0.0) || !(options.d_max > options.d_min)) {
        throw ValidationError("invalid D search grid");
    }
    struct PairData {
        double t0, t1, n0, n1;
    };
    std::vector<PairData> data;
    for (const auto& [t0, t1] : pairs) {
        if (!(t0 < t1)) throw ValidationError("pairs need t0 < t1");
        data.push_back({t0, t1, companion_norm(traj.interpolate(t0), m), companion_norm(traj.interpolate(t1), m)});
    }
    auto violation = [&](double d) {
        double worst = -INFINITY;
        for (const auto& p : data) {
            const double rhs = d * std::pow(p.t1 / p.t0, d) * p.n0 +
                               d * std::pow(p.t1, d) * source_integral(traj, source, m, p.t0, p.t1, d);
            const double v = rhs > 0.0 ? (p.n1 - rhs) / rhs : (p.n1 > 0.0 ? INFINITY : 0.0);
            worst = std::max(worst, v);
        }
        return worst;
    };
    for (int i = 0; i < options.grid; ++i) {
        const double d = options.d_min *
                         std::pow(options.d_max / options.d_min, static_cast<double>(i) / (options.grid - 1));
        const double v = violation(d);
        if (v <= options.slack) return {d, v};
    }
    throw NoFiniteConstant("no D in [" + std::to_string(options.d_min) + ", " +
                           std::to_string(options.d_max) + "] satisfies every sampled pair");
}

}  // namespace horizonwave
