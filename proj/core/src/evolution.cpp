#include "horizonwave/evolution.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "horizonwave/errors.hpp"
#include "horizonwave/parallel.hpp"

namespace horizonwave {
namespace {

// Dormand-Prince 5(4) tableau.
constexpr std::array<double, 7> kC{0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
constexpr std::array<std::array<double, 6>, 7> kA{{
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
}};
// b - b* (fifth minus embedded fourth order weights).
constexpr std::array<double, 7> kE{71.0 / 57600,      0.0,          -71.0 / 16695, 71.0 / 1920,
                                   -17253.0 / 339200, 22.0 / 525,   -1.0 / 40};

struct Stage {
    Field du;
    Field dut;
};

class Stepper {
public:
    Stepper(const OperatorSpec& op, const SourceFn& f) : op_(op), f_(f) {}

    Field acceleration(double t, const Field& u, const Field& ut) {
        ++evaluations;
        if (f_) return interior_apply(op_, t, u, ut, f_(t));
        return interior_apply(op_, t, u, ut);
    }

    int evaluations = 0;

private:
    const OperatorSpec& op_;
    const SourceFn& f_;
};

double ratio_norm(const Field& err, const Field& a, const Field& b, const Tolerance& tol) {
    const double vol = std::sqrt(a.torus().volume());
    const double scale = tol.abs * vol + tol.rel * std::max(a.l2_norm(), b.l2_norm());
    const double e = err.l2_norm();
    if (scale == 0.0) return e == 0.0 ? 0.0 : INFINITY;
    return e / scale;
}

void record_snapshots(Trajectory& traj, const std::vector<double>& times, std::size_t& next,
                      double t_hi, bool final) {
    while (next < times.size() && (times[next] <= t_hi || final)) {
        traj.snapshots.push_back(traj.interpolate(std::min(times[next], t_hi)));
        ++next;
    }
}

}  // namespace

EvolutionState Trajectory::final_state() const {
    const auto& n = nodes.back();
    return {n.t, n.u, n.ut};
}

std::vector<double> Trajectory::node_times() const {
    std::vector<double> out;
    out.reserve(nodes.size());
    for (const auto& n : nodes) out.push_back(n.t);
    return out;
}

EvolutionState Trajectory::interpolate(double t) const {
    if (nodes.empty()) throw ValidationError("empty trajectory");
    if (t < t_begin() || t > t_end()) throw ValidationError("interpolation time outside the trajectory");
    auto it = std::lower_bound(nodes.begin(), nodes.end(), t,
                               [](const TrajectoryNode& n, double x) { return n.t < x; });
    if (it != nodes.end() && it->t == t) return {t, it->u, it->ut};
    const auto& b = *it;
    const auto& a = *(it - 1);
    const double h = b.t - a.t;
    const double s = (t - a.t) / h;
    const double s2 = s * s;
    const double s3 = s2 * s;
    const double s4 = s3 * s;
    const double s5 = s4 * s;
    const double h0 = 1 - 10 * s3 + 15 * s4 - 6 * s5;
    const double h1 = s - 6 * s3 + 8 * s4 - 3 * s5;
    const double h2 = 0.5 * s2 - 1.5 * s3 + 1.5 * s4 - 0.5 * s5;
    const double h3 = 10 * s3 - 15 * s4 + 6 * s5;
    const double h4 = -4 * s3 + 7 * s4 - 3 * s5;
    const double h5 = 0.5 * s3 - s4 + 0.5 * s5;
    Field u = h0 * a.u + (h1 * h) * a.ut + (h2 * h * h) * a.utt + h3 * b.u + (h4 * h) * b.ut +
              (h5 * h * h) * b.utt;
    const double c00 = 2 * s3 - 3 * s2 + 1;
    const double c10 = s3 - 2 * s2 + s;
    const double c01 = -2 * s3 + 3 * s2;
    const double c11 = s3 - s2;
    Field ut = c00 * a.ut + (c10 * h) * a.utt + c01 * b.ut + (c11 * h) * b.utt;
    return {t, std::move(u), std::move(ut)};
}

Trajectory evolve(const OperatorSpec& op, const SourceFn& f, const EvolutionState& s0, double t_end,
                  const EvolveOptions& options) {
    if (!(s0.t > 0.0)) throw ValidationError("evolution starts at t > 0");
    if (!(t_end > s0.t)) throw ValidationError("t_end must exceed the start time");
    if (s0.u.components() != op.components || s0.ut.components() != op.components) {
        throw DimensionMismatch("state components do not match the operator");
    }
    auto snapshot_times = options.snapshot_times;
    std::sort(snapshot_times.begin(), snapshot_times.end());
    for (double ts : snapshot_times) {
        if (ts < s0.t || ts > t_end) throw ValidationError("snapshot time outside [t0, t_end]");
    }

    Stepper stepper(op, f);
    Trajectory traj;
    traj.nodes.push_back({s0.t, s0.u, s0.ut, stepper.acceleration(s0.t, s0.u, s0.ut)});
    std::size_t next_snapshot = 0;
    record_snapshots(traj, snapshot_times, next_snapshot, s0.t, false);

    const bool replay = !options.replay_steps.empty();
    std::size_t replay_index = 0;
    if (replay) {
        while (replay_index < options.replay_steps.size() && options.replay_steps[replay_index] <= s0.t) {
            ++replay_index;
        }
    }

    double t = s0.t;
    double h = 0.0;
    {
        const double guard = options.c_safe / spectral_rate(op, t);
        h = std::min({guard, 1e-2 * (t_end - t), 0.1 * t});
    }

    std::vector<Stage> k;
    k.reserve(7);
    while (t < t_end) {
        if (traj.stats.steps + traj.stats.rejected >= options.max_steps) {
            throw StepSizeUnderflow(t, "step budget exhausted");
        }
        const auto& node = traj.nodes.back();
        const double rate = spectral_rate(op, t);
        if (replay) {
            h = replay_index < options.replay_steps.size() ? options.replay_steps[replay_index] - t
                                                             : t_end - t;
        } else {
            h = std::min(h, options.c_safe / rate);
        }
        if (t + h > t_end || (!replay && t + 1.01 * h >= t_end)) h = t_end - t;
        if (!(h > 1e-14 * t)) throw StepSizeUnderflow(t, "h below 1e-14 t");

        k.clear();
        k.push_back({node.ut, node.utt});
        for (int s = 1; s < 7; ++s) {
            Field u = node.u;
            Field ut = node.ut;
            for (int j = 0; j < s; ++j) {
                const double a = kA[static_cast<std::size_t>(s)][static_cast<std::size_t>(j)];
                if (a == 0.0) continue;
                u += (h * a) * k[static_cast<std::size_t>(j)].du;
                ut += (h * a) * k[static_cast<std::size_t>(j)].dut;
            }
            const double ts = t + kC[static_cast<std::size_t>(s)] * h;
            Field acc = stepper.acceleration(ts, u, ut);
            if (s == 6) {
                // FSAL: the seventh stage sits at the new point.
                k.push_back({ut, acc});
                break;
            }
            k.push_back({std::move(ut), std::move(acc)});
        }
        // Stage 7 state equals the fifth-order solution.
        Field u_new = node.u;
        Field ut_new = node.ut;
        for (int j = 0; j < 6; ++j) {
            const double b = kA[6][static_cast<std::size_t>(j)];
            if (b == 0.0) continue;
            u_new += (h * b) * k[static_cast<std::size_t>(j)].du;
            ut_new += (h * b) * k[static_cast<std::size_t>(j)].dut;
        }
        Field err_u = Field::zeros(node.u.torus(), node.u.components());
        Field err_ut = err_u;
        for (int j = 0; j < 7; ++j) {
            const double e = kE[static_cast<std::size_t>(j)];
            if (e == 0.0) continue;
            err_u += (h * e) * k[static_cast<std::size_t>(j)].du;
            err_ut += (h * e) * k[static_cast<std::size_t>(j)].dut;
        }
        const double err = std::max(ratio_norm(err_u, node.u, u_new, options.tol),
                                    ratio_norm(err_ut, node.ut, ut_new, options.tol));

        if (!replay && !(err <= 1.0)) {
            ++traj.stats.rejected;
            const double factor = std::isfinite(err) ? std::max(0.2, 0.9 * std::pow(err, -0.2)) : 0.2;
            h *= factor;
            continue;
        }

        const double t_new = (t + h >= t_end) ? t_end : t + h;
        traj.stats.max_cfl_ratio = std::max(traj.stats.max_cfl_ratio, h * rate);
        ++traj.stats.steps;
        traj.nodes.push_back({t_new, std::move(u_new), std::move(ut_new), std::move(k[6].dut)});
        record_snapshots(traj, snapshot_times, next_snapshot, t_new, t_new >= t_end);
        t = t_new;
        if (replay) {
            ++replay_index;
        } else {
            const double factor = err == 0.0 ? 5.0 : std::min(5.0, std::max(0.2, 0.9 * std::pow(err, -0.2)));
            h *= factor;
        }
    }
    traj.stats.rhs_evaluations = stepper.evaluations;
    return traj;
}

CharacteristicSolution characteristic_solve(const OperatorSpec& op, const Field& u0, const Source& f,
                                            int n, double tau, double t_end,
                                            const EvolveOptions& options) {
    const auto verdict = admissibility_check(op);
    if (!verdict.admissible()) {
        throw NotAdmissible(op.label + ": " + to_string(verdict.verdict) +
                            (verdict.detail.empty() ? "" : " (" + verdict.detail + ")"));
    }
    if (!(tau > 0.0 && tau < t_end)) throw ValidationError("tau must lie in (0, t_end)");
    auto jet = linear_asymptotics(op, u0, f, n);
    auto [u, ut] = evaluate_jet(jet, tau);
    SourceFn source;
    if (!f.is_zero()) {
        source = [&f, &u0](double t) { return f.at(t, u0.torus(), u0.components()); };
    }
    auto traj = evolve(op, source, {tau, std::move(u), std::move(ut)}, t_end, options);
    return {std::move(jet), std::move(traj)};
}

HorizonLimitStudy horizon_limit_study(const OperatorSpec& op, const Source& f, const Field& u0, int n,
                                      const std::vector<double>& tau_list, double t1,
                                      const HorizonLimitOptions& options) {
    if (tau_list.empty()) throw ValidationError("tau_list is empty");
    for (std::size_t i = 0; i < tau_list.size(); ++i) {
        if (!(tau_list[i] > 0.0 && tau_list[i] < t1)) throw ValidationError("tau outside (0, t1)");
        if (i > 0 && !(tau_list[i] < tau_list[i - 1])) throw ValidationError("tau_list must decrease");
    }
    Source jet_source;
    jet_source.jet = f.jet;
    const auto w = linear_asymptotics(op, u0, jet_source, n);

    // P w^N - f is a polynomial in t whose jet vanishes through order N; its
    // exact Taylor tail drives the defect e = v_tau - w^N.
    const std::size_t degree_bound = static_cast<std::size_t>(n) + 3 +
                                     std::max({op.psi_taylor.size(), op.l1_taylor.size(),
                                               op.l2_taylor.size(), f.jet.size()});
    std::vector<Field> tail;
    for (std::size_t k = static_cast<std::size_t>(n) + 1; k <= degree_bound; ++k) {
        Field c = operator_jet(op, w.jets, static_cast<int>(k));
        if (k < f.jet.size()) c -= f.jet[k];
        tail.push_back(std::move(c));
    }
    const SourceFn defect_source = [&tail, n](double t) {
        // -sum_k c_k t^k / k! for k > N.
        Field acc = tail.front();
        acc *= 0.0;
        double coeff = 1.0;
        for (int j = 1; j <= n + 1; ++j) coeff *= t / j;
        for (std::size_t i = 0; i < tail.size(); ++i) {
            if (i > 0) coeff *= t / static_cast<double>(n + 1 + static_cast<int>(i));
            acc -= coeff * tail[i];
        }
        return acc;
    };

    const int d = op.components;
    const Field zero = Field::zeros(u0.torus(), d);
    std::vector<std::optional<Trajectory>> runs(tau_list.size());
    parallel_for(tau_list.size(), [&](std::size_t i) {
        runs[i] = evolve(op, defect_source, {tau_list[i], zero, zero}, t1, options.evolve);
    });

    const double s_hi = 2.0 * options.m + 1.0;
    HorizonLimitStudy study;
    for (std::size_t i = 0; i < tau_list.size(); ++i) {
        HorizonLimitRow row;
        row.tau = tau_list[i];
        row.deviation = sobolev_norm(runs[i]->final_node().u, s_hi);
        row.stats = runs[i]->stats;
        study.rows.push_back(row);
    }
    // v_{tau_i} - v_{tau_{i+1}} solves P d = 0 from d(tau_i) = -e_{i+1}(tau_i);
    // evolving it directly keeps these tiny differences relatively accurate.
    std::vector<double> cauchy(tau_list.size(), 0.0);
    parallel_for(tau_list.size() - 1, [&](std::size_t i) {
        auto later = runs[i + 1]->interpolate(tau_list[i]);
        EvolutionState start{tau_list[i], -later.u, -later.ut};
        auto diff = evolve(op, SourceFn{}, start, t1, options.evolve);
        cauchy[i] = sobolev_norm(diff.final_node().u, s_hi);
    });
    for (std::size_t i = 0; i + 1 < tau_list.size(); ++i) study.rows[i].cauchy_difference = cauchy[i];

    const auto& last = *runs.back();
    const double lo = std::max(options.fit_begin, last.t_begin());
    const double hi = std::min(options.fit_end, last.t_end());
    if (options.fit_samples >= 2 && hi > lo) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        int count = 0;
        for (int i = 0; i < options.fit_samples; ++i) {
            const double t = lo * std::pow(hi / lo, static_cast<double>(i) / (options.fit_samples - 1));
            const double norm = sobolev_norm(last.interpolate(t).u, 2.0 * options.m);
            study.profile.emplace_back(t, norm);
            if (!(norm > 0.0)) continue;
            const double x = std::log(t);
            const double y = std::log(norm);
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
            ++count;
        }
        if (count >= 2) study.slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
    }
    return study;
}

PicardResult picard_iterate(const OperatorSpec& op, const Nonlinearity& f, const Field& u0, int n,
                            double t_final, double tau, const PicardOptions& options) {
    const auto verdict = admissibility_check(op);
    if (!verdict.admissible()) throw NotAdmissible(op.label + ": " + to_string(verdict.verdict));
    if (!(tau > 0.0 && tau < t_final)) throw ValidationError("tau must lie in (0, T)");
    if (options.max_iter < 1) throw ValidationError("max_iter must be >= 1");

    PicardResult result;
    result.jet = semilinear_asymptotics(op, f, u0, n);
    auto [seed_u, seed_ut] = evaluate_jet(result.jet, tau);
    const EvolutionState seed{tau, seed_u, seed_ut};
    const double s = 2.0 * options.m;

    // v_0 = w^N.
    const auto& jet = result.jet;
    std::function<Field(double)> previous = [&jet](double t) { return evaluate_jet(jet, t).first; };
    std::optional<Trajectory> current;
    EvolveOptions evolve_options = options.evolve;

    for (int iter = 0; iter < options.max_iter; ++iter) {
        const SourceFn source = [&previous, &f](double t) { return f.apply(previous(t)); };
        Trajectory next = evolve(op, source, seed, t_final, evolve_options);
        if (iter == 0) evolve_options.replay_steps = next.node_times();

        double increment = 0.0;
        double residual = 0.0;
        for (const auto& node : next.nodes) {
            const Field prev = previous(node.t);
            increment = std::max(increment, sobolev_norm(node.u - prev, s));
            // P v_{k+1} = f(v_k) at the nodes by construction.
            residual = std::max(residual, (f.apply(prev) - f.apply(node.u)).l2_norm());
        }
        result.increments.push_back(increment);
        if (result.increments.size() >= 2) {
            const double before = result.increments[result.increments.size() - 2];
            result.ratios.push_back(before > 0.0 ? increment / before : 0.0);
        }
        result.residual = residual;
        current = std::move(next);
        const Trajectory* latest = &*current;
        previous = [latest](double t) { return latest->interpolate(t).u; };
        if (increment < options.tol) {
            result.converged = true;
            break;
        }
    }
    if (!result.converged && (result.ratios.empty() || result.ratios.back() >= 1.0)) {
        throw NoConvergence("Picard increments stopped contracting after " +
                            std::to_string(result.increments.size()) + " iterations");
    }
    result.traj = std::move(*current);
    return result;
}

}  // namespace horizonwave
