#include "scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <set>

#include "expression.hpp"
#include "horizonwave/energy.hpp"
#include "horizonwave/errors.hpp"
#include "horizonwave/io.hpp"
#include "horizonwave/nonlinearity.hpp"

namespace horizonwave::cli {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

void reject_unknown(const json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
    if (!obj.is_object()) throw ValidationError(where + " must be a table");
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [key, _] : obj.items()) {
        if (!ok.contains(key)) throw ValidationError("unknown key '" + key + "' in " + where);
    }
}

double as_number(const json& v, const std::string& what) {
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) return constant_expression(v.get<std::string>());
    throw ValidationError(what + " must be a number or a constant expression");
}

double number_or(const json& obj, const char* key, double fallback) {
    return obj.contains(key) ? as_number(obj.at(key), key) : fallback;
}

int integer_or(const json& obj, const char* key, int fallback) {
    if (!obj.contains(key)) return fallback;
    const auto& v = obj.at(key);
    if (!v.is_number_integer()) throw ValidationError(std::string(key) + " must be an integer");
    return v.get<int>();
}

std::vector<double> numbers(const json& v, const std::string& what) {
    std::vector<double> out;
    if (!v.is_array()) return {as_number(v, what)};
    for (const auto& x : v) out.push_back(as_number(x, what));
    return out;
}

std::vector<int> integers(const json& v, const std::string& what) {
    std::vector<int> out;
    if (v.is_number_integer()) return {v.get<int>()};
    if (!v.is_array()) throw ValidationError(what + " must be an integer or an array of integers");
    for (const auto& x : v) {
        if (!x.is_number_integer()) throw ValidationError(what + " must contain integers");
        out.push_back(x.get<int>());
    }
    return out;
}

json obstruction_json(const Obstruction& o) {
    json modes = json::array();
    for (const auto& m : o.modes) {
        modes.push_back({{"mode", m.mode}, {"magnitude", m.magnitude}, {"rhs_magnitude", m.rhs_magnitude}});
    }
    return {{"kind", o.kind == ObstructionKind::SingularModes ? "singular_modes" : "near_singular"},
            {"modes", modes},
            {"kernel_dimension", o.kernel_basis.size()}};
}

json jet_summary(const AsymptoticSolution& w) {
    json orders = json::array();
    for (const auto& r : w.orders) {
        json e{{"k", r.k}, {"cokernel_violation", r.cokernel_violation}, {"unsolvable_norm", r.unsolvable_norm}};
        if (r.obstruction) e["obstruction"] = obstruction_json(*r.obstruction);
        if (r.near_singular) e["near_singular"] = obstruction_json(*r.near_singular);
        orders.push_back(e);
    }
    json norms = json::array();
    for (const auto& j : w.jets) norms.push_back(j.l2_norm());
    return {{"order", w.order},
            {"obstructed_orders", w.obstructed_orders()},
            {"cokernel_orders", w.cokernel_orders()},
            {"residuals", residual_order_check(w)},
            {"jet_l2_norms", norms},
            {"orders", orders}};
}

EvolveOptions evolve_options(const json& params) {
    EvolveOptions o;
    o.tol.rel = number_or(params, "rel_tol", o.tol.rel);
    o.tol.abs = number_or(params, "abs_tol", o.tol.abs);
    o.c_safe = number_or(params, "c_safe", o.c_safe);
    o.max_steps = integer_or(params, "max_steps", o.max_steps);
    if (params.contains("snapshots")) o.snapshot_times = numbers(params.at("snapshots"), "snapshots");
    return o;
}

Source build_source(const json& data, const SpatialTorus& torus, int components) {
    Source f;
    if (!data.contains("source_jet")) return f;
    for (const auto& e : data.at("source_jet")) {
        if (components == 1) {
            f.jet.push_back(field_from_expression(torus, e.get<std::string>()));
        } else {
            std::vector<Field> parts;
            for (const auto& c : e) parts.push_back(field_from_expression(torus, c.get<std::string>()));
            f.jet.push_back(Field::from_components(parts));
        }
    }
    return f;
}

void write_final_field(RunContext& ctx, const Field& u, bool dump) {
    io::write_field_csv(ctx.artifact("final_u.csv"), u);
    if (dump) {
        io::write_coefficients(ctx.artifact("final_u.bin"), u);
        ctx.artifacts.push_back("final_u.bin.json");
    }
}

void apply_final_expectation(RunContext& ctx, const json& expect, const Field& u) {
    if (!expect.contains("exact_final")) return;
    const Field exact = field_from_expression(u.torus(), expect.at("exact_final").get<std::string>());
    const double err = (u - exact).max_abs();
    ctx.results["final_error"] = err;
    ctx.check_at_most("final_error", err, number_or(expect, "max_final_error", 1e-6));
}

void run_asymptotics(RunContext& ctx, const json& params, const Field& u0, const Source& f,
                     const std::optional<Nonlinearity>& nl) {
    const int n = integer_or(params, "N", 8);
    ctx.jet = nl ? semilinear_asymptotics(ctx.op, *nl, u0, n) : linear_asymptotics(ctx.op, u0, f, n);
    ctx.results["jet"] = jet_summary(*ctx.jet);
    io::write_jet(ctx.artifact("jet.bin"), *ctx.jet);
    ctx.artifacts.push_back("jet.bin.json");
}

void run_evolve(RunContext& ctx, const json& params, const json& data, const Field& u0, const fs::path& base) {
    const double t0 = number_or(params, "t0", 1e-3);
    const double t_end = number_or(params, "t_end", 1.0);
    const Field ut0 = data.contains("ut0") || data.contains("ut0_file")
                          ? build_field(data, "ut0", ctx.model.torus, base, ctx.op.components)
                          : Field::zeros(ctx.model.torus, ctx.op.components);
    ctx.traj = evolve(ctx.op, {}, {t0, u0, ut0}, t_end, evolve_options(params));
}

void trajectory_outputs(RunContext& ctx, const json& params) {
    const int m = integer_or(params, "m", 1);
    io::write_trajectory_csv(ctx.artifact("trajectory.csv"), *ctx.traj, m);
    const auto& s = ctx.traj->stats;
    ctx.results["integrator"] = {{"steps", s.steps},
                                 {"rejected", s.rejected},
                                 {"rhs_evaluations", s.rhs_evaluations},
                                 {"max_cfl_ratio", s.max_cfl_ratio}};
    const auto fin = ctx.traj->final_state();
    ctx.results["t_end"] = fin.t;
    ctx.results["final_u_norm"] = sobolev_norm(fin.u, 2.0 * m);
    ctx.results["final_ut_norm"] = sobolev_norm(fin.ut, 2.0 * m);
    write_final_field(ctx, fin.u, params.value("dump", false));
}

void run_horizon_limit(RunContext& ctx, const json& params, const Field& u0, const Source& f) {
    HorizonLimitOptions opts;
    opts.evolve = evolve_options(params);
    opts.m = integer_or(params, "m", 1);
    const int n = integer_or(params, "N", 2);
    const auto taus = numbers(params.value("taus", json::array({4e-3, 2e-3, 1e-3, 5e-4})), "taus");
    const double t1 = number_or(params, "t1", 0.5);
    const auto study = horizon_limit_study(ctx.op, f, u0, n, taus, t1, opts);
    std::vector<std::vector<double>> rows;
    json cauchy = json::array();
    for (const auto& r : study.rows) {
        rows.push_back({r.tau, r.deviation, r.cauchy_difference.value_or(NAN), static_cast<double>(r.stats.steps)});
        if (r.cauchy_difference) cauchy.push_back(*r.cauchy_difference);
    }
    io::write_csv(ctx.artifact("horizon_limit.csv"), {"tau", "deviation", "cauchy_difference", "steps"}, rows);
    std::vector<std::vector<double>> profile;
    for (const auto& [t, v] : study.profile) profile.push_back({t, v});
    io::write_csv(ctx.artifact("profile.csv"), {"t", "defect_norm"}, profile);
    bool monotone = true;
    for (std::size_t i = 1; i < cauchy.size(); ++i) monotone = monotone && cauchy[i].get<double>() < cauchy[i - 1].get<double>();
    ctx.results["slope"] = study.slope;
    ctx.results["slope_bound"] = n + 1.5;
    ctx.results["cauchy_differences"] = cauchy;
    ctx.results["cauchy_monotone"] = monotone;
}

void run_picard(RunContext& ctx, const json& params, const Field& u0, const Nonlinearity& nl) {
    PicardOptions opts;
    opts.evolve = evolve_options(params);
    opts.m = integer_or(params, "m", 1);
    opts.max_iter = integer_or(params, "max_iter", opts.max_iter);
    opts.tol = number_or(params, "picard_tol", opts.tol);
    const auto res = picard_iterate(ctx.op, nl, u0, integer_or(params, "N", 0), number_or(params, "T", 0.3),
                                    number_or(params, "tau", 1e-3), opts);
    std::vector<std::vector<double>> rows;
    for (std::size_t k = 0; k < res.increments.size(); ++k) {
        rows.push_back({static_cast<double>(k), res.increments[k], k < res.ratios.size() ? res.ratios[k] : NAN});
    }
    io::write_csv(ctx.artifact("picard.csv"), {"k", "increment", "ratio"}, rows);
    ctx.jet = res.jet;
    ctx.traj = res.traj;
    ctx.results["converged"] = res.converged;
    ctx.results["increments"] = res.increments;
    ctx.results["ratios"] = res.ratios;
    ctx.results["residual"] = res.residual;
}

void run_energy(RunContext& ctx, const json& params) {
    const int m = integer_or(params, "m", 1);
    std::vector<EnergyRow> rows;
    std::vector<EvolutionState> states;
    for (const auto& node : ctx.traj->nodes) {
        states.push_back({node.t, node.u, node.ut});
        rows.push_back(energy(ctx.model, states.back(), m));
    }
    io::write_energy_csv(ctx.artifact("energy.csv"), rows);
    bool nonneg = true;
    for (const auto& r : rows)
        for (double term : r.terms) nonneg = nonneg && term >= 0.0;
    ctx.results["energy_terms_nonnegative"] = nonneg;
    const auto eq = norm_equivalence_check(ctx.model, states, m);
    ctx.results["ratio_min"] = eq.ratio_min;
    ctx.results["ratio_max"] = eq.ratio_max;
    const auto fit = fit_energy_constant(*ctx.traj, ctx.op, m, log_spaced_pairs(*ctx.traj, integer_or(params, "pairs", 12)));
    ctx.results["d_fit"] = fit.d_fit;
    ctx.results["max_violation"] = fit.max_violation;
    ctx.check("energy_terms_nonnegative", nonneg);
}

void apply_expectations(RunContext& ctx, const json& expect) {
    reject_unknown(expect,
                   {"admissible", "obstruction", "obstruction_orders", "cokernel", "cokernel_orders", "max_residual",
                    "exact_final", "max_final_error", "min_slope", "monotone_cauchy", "converged",
                    "max_picard_residual", "max_fit_violation"},
                   "[expect]");
    if (expect.contains("admissible")) {
        const bool want = expect.at("admissible").get<bool>();
        const bool got = ctx.results.at("admissibility").at("verdict") == to_string(Verdict::Admissible);
        ctx.check("admissible", want == got, {{"expected", want}, {"got", got}}, !want);
    }
    if (ctx.jet) {
        const auto obstructed = ctx.jet->obstructed_orders();
        const auto cokernel = ctx.jet->cokernel_orders();
        if (expect.contains("obstruction")) {
            const bool want = expect.at("obstruction").get<bool>();
            ctx.check("obstruction", want == !obstructed.empty(), {{"obstructed_orders", obstructed}}, want);
        }
        if (expect.contains("obstruction_orders")) {
            const auto want = integers(expect.at("obstruction_orders"), "obstruction_orders");
            ctx.check("obstruction_orders", want == obstructed, {{"expected", want}, {"got", obstructed}}, true);
        }
        if (expect.contains("cokernel")) {
            const bool want = expect.at("cokernel").get<bool>();
            ctx.check("cokernel", want == !cokernel.empty(), {{"cokernel_orders", cokernel}}, want);
        }
        if (expect.contains("cokernel_orders")) {
            const auto want = integers(expect.at("cokernel_orders"), "cokernel_orders");
            ctx.check("cokernel_orders", want == cokernel, {{"expected", want}, {"got", cokernel}}, true);
        }
        if (expect.contains("max_residual")) {
            // Obstructed orders carry their unsolvable part by construction.
            const auto res = residual_order_check(*ctx.jet);
            double worst = 0.0;
            for (std::size_t k = 0; k < res.size(); ++k) {
                if (!ctx.jet->orders.empty() && k < ctx.jet->orders.size() && ctx.jet->orders[k].cokernel_violation) continue;
                worst = std::max(worst, res[k]);
            }
            ctx.check_at_most("max_residual", worst, as_number(expect.at("max_residual"), "max_residual"));
        }
    }
    if (ctx.traj && ctx.results.contains("final_u_norm")) apply_final_expectation(ctx, expect, ctx.traj->final_state().u);
    if (expect.contains("min_slope")) {
        ctx.check("min_slope", ctx.results.at("slope").get<double>() >= as_number(expect.at("min_slope"), "min_slope"),
                  {{"slope", ctx.results.at("slope")}});
    }
    if (expect.contains("monotone_cauchy")) {
        ctx.check("monotone_cauchy", ctx.results.at("cauchy_monotone").get<bool>() == expect.at("monotone_cauchy").get<bool>());
    }
    if (expect.contains("converged")) {
        ctx.check("converged", ctx.results.at("converged").get<bool>() == expect.at("converged").get<bool>());
    }
    if (expect.contains("max_picard_residual")) {
        ctx.check_at_most("picard_residual", ctx.results.at("residual").get<double>(),
                          as_number(expect.at("max_picard_residual"), "max_picard_residual"));
    }
    if (expect.contains("max_fit_violation")) {
        ctx.check_at_most("fit_violation", ctx.results.at("max_violation").get<double>(),
                          as_number(expect.at("max_fit_violation"), "max_fit_violation"));
    }
}

}  // namespace

void RunContext::check(const std::string& name, bool passed, nlohmann::json detail, bool obstruction) {
    json entry{{"name", name}, {"passed", passed}};
    if (!detail.is_null()) entry["detail"] = std::move(detail);
    if (obstruction) entry["obstruction_check"] = true;
    checks.push_back(std::move(entry));
}

void RunContext::check_at_most(const std::string& name, double value, double limit) {
    check(name, value <= limit, {{"value", value}, {"limit", limit}});
}

fs::path RunContext::artifact(const std::string& file) {
    artifacts.push_back(file);
    return out_dir / file;
}

HorizonModel build_model(const json& table) {
    reject_unknown(table, {"kind", "sign", "period", "periods", "resolution", "m", "transverse", "v"}, "[model]");
    const std::string kind = table.value("kind", "misner");
    const auto resolution = integers(table.value("resolution", json(32)), "resolution");
    if (kind == "misner") {
        const std::string sign = table.value("sign", "+");
        if (sign != "+" && sign != "-") throw ValidationError("model.sign must be \"+\" or \"-\"");
        if (resolution.size() != 1) throw ValidationError("misner needs a single resolution");
        return make_misner(sign == "+" ? Sign::Plus : Sign::Minus, number_or(table, "period", 2 * std::numbers::pi),
                           resolution[0]);
    }
    const auto periods = table.contains("periods") ? numbers(table.at("periods"), "periods")
                                                  : std::vector<double>(resolution.size(), 2 * std::numbers::pi);
    if (kind == "generalized_misner") {
        return make_generalized_misner(integer_or(table, "m", 2), integer_or(table, "transverse", 0), periods, resolution);
    }
    if (kind == "torus_quotient") {
        if (!table.contains("v")) throw ValidationError("torus_quotient needs model.v");
        return make_torus_quotient(numbers(table.at("v"), "v"), periods, resolution);
    }
    throw ValidationError("unknown model kind '" + kind + "'");
}

OperatorSpec build_operator(const json& table, const HorizonModel& model) {
    reject_unknown(table, {"preset", "alpha", "w_t", "w_spatial"}, "[operator]");
    if (table.contains("preset")) {
        if (table.size() != 1) throw ValidationError("operator.preset excludes alpha/w_t/w_spatial");
        return operator_preset(model, table.at("preset").get<std::string>());
    }
    WaveVectorField w;
    std::vector<Coefficient> alpha;
    if (table.contains("w_t"))
        for (double c : numbers(table.at("w_t"), "w_t")) w.w_t.emplace_back(c);
    if (table.contains("w_spatial")) w.w_spatial = numbers(table.at("w_spatial"), "w_spatial");
    if (table.contains("alpha"))
        for (double c : numbers(table.at("alpha"), "alpha")) alpha.emplace_back(c);
    return scalar_operator(model, w, alpha);
}

Field build_field(const json& data, const std::string& key, const SpatialTorus& torus, const fs::path& base_dir,
                  int components) {
    Field f = Field::zeros(torus, components);
    if (data.contains(key + "_file")) {
        const fs::path p = base_dir / data.at(key + "_file").get<std::string>();
        f = io::read_coefficients(p);
        if (!(f.torus() == torus)) throw ValidationError(p.string() + " was written on a different torus");
    } else if (data.contains(key)) {
        const auto& v = data.at(key);
        if (v.is_array()) {
            std::vector<Field> parts;
            for (const auto& e : v) parts.push_back(field_from_expression(torus, e.get<std::string>()));
            f = Field::from_components(parts);
        } else if (v.is_string()) {
            f = field_from_expression(torus, v.get<std::string>());
        } else {
            f = Field::constant(torus, as_number(v, key));
        }
    } else {
        throw ValidationError("data." + key + " (or " + key + "_file) is required");
    }
    if (f.components() != components) {
        throw ValidationError("data." + key + " has " + std::to_string(f.components()) + " components, operator needs " +
                              std::to_string(components));
    }
    return f;
}

Nonlinearity build_nonlinearity(const json& table) {
    reject_unknown(table, {"kind", "coeffs", "scale"}, "[nonlinearity]");
    const std::string kind = table.value("kind", "zero");
    const double scale = number_or(table, "scale", 1.0);
    if (kind == "zero") return Nonlinearity::zero();
    if (kind == "polynomial") return Nonlinearity::polynomial(numbers(table.value("coeffs", json::array()), "coeffs"));
    if (kind == "exp") return Nonlinearity::exp(scale);
    if (kind == "sin") return Nonlinearity::sin(scale);
    if (kind == "cos") return Nonlinearity::cos(scale);
    throw ValidationError("unknown nonlinearity kind '" + kind + "'");
}

RunContext run_experiment(const json& config, const fs::path& base_dir, const fs::path& out_dir) {
    reject_unknown(config,
                   {"schema", "name", "description", "experiment", "output", "model", "operator", "data",
                    "nonlinearity", "params", "expect", "gallery"},
                   "scenario");
    if (config.value("schema", 0) != 1) throw ValidationError("scenario needs schema = 1");
    const std::string experiment = config.value("experiment", "");
    static const std::set<std::string> kExperiments{"asymptotics", "evolve",   "characteristic",
                                                    "horizon_limit", "picard", "energy"};
    if (!kExperiments.contains(experiment)) throw ValidationError("unknown experiment '" + experiment + "'");

    RunContext ctx;
    ctx.config = config;
    ctx.out_dir = out_dir;
    ctx.model = build_model(config.value("model", json::object()));
    ctx.op = build_operator(config.value("operator", json::object()), ctx.model);

    const json data = config.value("data", json::object());
    reject_unknown(data, {"u0", "u0_file", "ut0", "ut0_file", "source_jet"}, "[data]");
    const json params = config.value("params", json::object());
    reject_unknown(params,
                   {"N", "tau", "t0", "t_end", "t1", "T", "m", "rel_tol", "abs_tol", "c_safe", "max_steps",
                    "snapshots", "taus", "max_iter", "picard_tol", "pairs", "dump"},
                   "[params]");
    const Field u0 = build_field(data, "u0", ctx.model.torus, base_dir, ctx.op.components);
    const Source f = build_source(data, ctx.model.torus, ctx.op.components);
    std::optional<Nonlinearity> nl;
    if (config.contains("nonlinearity")) nl = build_nonlinearity(config.at("nonlinearity"));

    fs::create_directories(out_dir);
    const auto adm = admissibility_check(ctx.op);
    ctx.results["operator"] = ctx.op.label;
    ctx.results["model"] = ctx.model.name;
    ctx.results["admissibility"] = {{"verdict", to_string(adm.verdict)}, {"detail", adm.detail}};
    if (!adm.witness_point.empty()) {
        ctx.results["admissibility"]["witness_point"] = adm.witness_point;
        ctx.results["admissibility"]["witness_value"] = adm.witness_value;
    }

    if (experiment == "asymptotics") {
        run_asymptotics(ctx, params, u0, f, nl);
    } else if (experiment == "evolve") {
        run_evolve(ctx, params, data, u0, base_dir);
        trajectory_outputs(ctx, params);
    } else if (experiment == "characteristic" || experiment == "energy") {
        const auto sol = characteristic_solve(ctx.op, u0, f, integer_or(params, "N", 8), number_or(params, "tau", 1e-3),
                                              number_or(params, "t_end", 1.0), evolve_options(params));
        ctx.jet = sol.jet;
        ctx.traj = sol.traj;
        ctx.results["jet"] = jet_summary(sol.jet);
        io::write_jet(ctx.artifact("jet.bin"), sol.jet);
        ctx.artifacts.push_back("jet.bin.json");
        trajectory_outputs(ctx, params);
        if (experiment == "energy") run_energy(ctx, params);
    } else if (experiment == "horizon_limit") {
        run_horizon_limit(ctx, params, u0, f);
    } else {
        if (!nl) throw ValidationError("picard needs a [nonlinearity] table");
        run_picard(ctx, params, u0, *nl);
        trajectory_outputs(ctx, params);
    }
    if (config.contains("expect")) apply_expectations(ctx, config.at("expect"));
    return ctx;
}

json finish_run(RunContext& ctx) {
    json failed = json::array();
    bool obstruction_missed = false;
    for (const auto& c : ctx.checks) {
        if (c.at("passed").get<bool>()) continue;
        failed.push_back(c);
        obstruction_missed = obstruction_missed || c.value("obstruction_check", false);
    }
    json report{{"status", failed.empty() ? "ok" : "check_failed"},
                {"scenario", ctx.config.value("name", "")},
                {"experiment", ctx.config.value("experiment", "")},
                {"results", ctx.results},
                {"checks", ctx.checks},
                {"artifacts", ctx.artifacts}};
    std::ofstream(ctx.out_dir / "report.json", std::ios::binary) << report.dump(2) << '\n';
    if (!failed.empty()) {
        throw CheckFailure(obstruction_missed ? "expected obstruction not detected" : "scenario checks failed",
                           obstruction_missed ? kMissedObstruction : kNumeric, failed);
    }
    return report;
}

json error_report(int exit_code, const std::string& type, const std::string& message, const json& extra) {
    json r{{"status", "error"}, {"exit_code", exit_code}, {"error", type}, {"message", message}};
    if (!extra.is_null()) r["details"] = extra;
    return r;
}

}  // namespace horizonwave::cli
