#include "horizonwave/asymptotic_engine.hpp"

#include <algorithm>

#include "horizonwave/errors.hpp"

namespace horizonwave {
namespace {

std::vector<Field> series_to_jets(std::span<const Field> series) {
    std::vector<Field> out;
    double factorial = 1.0;
    for (std::size_t j = 0; j < series.size(); ++j) {
        if (j > 0) factorial *= static_cast<double>(j);
        out.push_back(factorial * series[j]);
    }
    return out;
}

// f_k for the semilinear recursion from u_0..u_k.
Field composed_source(const Nonlinearity& f, std::span<const Field> jets, int k) {
    const auto series = jets_to_series(jets.subspan(0, static_cast<std::size_t>(k + 1)));
    const auto composed = f.compose(series, k);
    return series_to_jets(composed).back();
}

AsymptoticSolution run_recursion(const OperatorSpec& op, const Field& u0, int n,
                                 const std::function<Field(std::span<const Field>, int)>& source_k) {
    if (n < 0) throw ValidationError("jet order N must be >= 0");
    if (u0.components() != op.components) {
        throw DimensionMismatch("u0 component count does not match the operator");
    }
    if (!(u0.torus() == op.model.torus)) throw DimensionMismatch("u0 lives on a different torus");
    AsymptoticSolution w;
    w.op = op;
    w.order = n;
    w.jets.push_back(u0);
    for (int k = 0; k <= n; ++k) {
        const auto family = horizon_transport_family(op, k);
        const Field rhs = family.rhs(w.jets, source_k(w.jets, k));
        auto solved = solve_transport(family.a_k, rhs);
        OrderReport report;
        report.k = k;
        report.unsolvable_norm = solved.unsolvable_norm;
        if (solved.obstruction) {
            report.cokernel_violation = solved.obstruction->unsolvable(cokernel_tolerance(rhs));
        }
        report.obstruction = std::move(solved.obstruction);
        report.near_singular = std::move(solved.near_singular);
        w.orders.push_back(std::move(report));
        w.jets.push_back(std::move(solved.solution));
    }
    return w;
}

}  // namespace

Field Source::jet_at(int k, const SpatialTorus& torus, int components) const {
    if (k < static_cast<int>(jet.size())) return jet[static_cast<std::size_t>(k)];
    if (jet.empty() && !closed) return Field::zeros(torus, components);
    throw OrderShortfall("source jet", k, static_cast<int>(jet.size()) - 1);
}

Field Source::at(double t, const SpatialTorus& torus, int components) const {
    if (closed) return closed(t);
    Field acc = Field::zeros(torus, components);
    double coeff = 1.0;
    for (std::size_t j = 0; j < jet.size(); ++j) {
        if (j > 0) coeff *= t / static_cast<double>(j);
        acc += coeff * jet[j];
    }
    return acc;
}

bool AsymptoticSolution::obstructed() const {
    return std::any_of(orders.begin(), orders.end(),
                       [](const OrderReport& r) { return r.obstruction.has_value(); });
}

std::vector<int> AsymptoticSolution::obstructed_orders() const {
    std::vector<int> out;
    for (const auto& r : orders)
        if (r.obstruction) out.push_back(r.k);
    return out;
}

std::vector<int> AsymptoticSolution::cokernel_orders() const {
    std::vector<int> out;
    for (const auto& r : orders)
        if (r.cokernel_violation) out.push_back(r.k);
    return out;
}

double cokernel_tolerance(const Field& rhs) {
    double scale = 0.0;
    for (const auto& c : rhs.data()) scale = std::max(scale, std::abs(c));
    return 1e-12 * std::max(1.0, scale);
}

std::vector<Field> jets_to_series(std::span<const Field> jets) {
    std::vector<Field> out;
    double factorial = 1.0;
    for (std::size_t j = 0; j < jets.size(); ++j) {
        if (j > 0) factorial *= static_cast<double>(j);
        out.push_back((1.0 / factorial) * jets[j]);
    }
    return out;
}

AsymptoticSolution linear_asymptotics(const OperatorSpec& op, const Field& u0, const Source& f, int n) {
    if (!f.jet.empty() && static_cast<int>(f.jet.size()) < n + 1) {
        throw OrderShortfall("source jet", n, static_cast<int>(f.jet.size()) - 1);
    }
    if (f.jet.empty() && f.closed) throw OrderShortfall("source jet", n, -1);
    auto w = run_recursion(op, u0, n, [&](std::span<const Field>, int k) {
        return f.jet_at(k, u0.torus(), u0.components());
    });
    w.source = f;
    return w;
}

AsymptoticSolution semilinear_asymptotics(const OperatorSpec& op, const Nonlinearity& f,
                                          const Field& u0, int n) {
    if (op.components != 1) throw ValidationError("semilinear asymptotics are scalar");
    auto w = run_recursion(op, u0, n, [&](std::span<const Field> jets, int k) {
        return composed_source(f, jets, k);
    });
    w.nonlinearity = f;
    return w;
}

std::pair<Field, Field> evaluate_jet(const AsymptoticSolution& w, double t) {
    if (t < 0.0) throw ValidationError("evaluate_jet needs t >= 0");
    const auto& jets = w.jets;
    Field u = jets.back();
    for (std::size_t j = jets.size() - 1; j-- > 0;) u = jets[j] + (t / static_cast<double>(j + 1)) * u;
    Field ut = Field::zeros(jets.front().torus(), jets.front().components());
    if (jets.size() > 1) {
        ut = jets.back();
        for (std::size_t j = jets.size() - 1; j-- > 1;) ut = jets[j] + (t / static_cast<double>(j)) * ut;
    }
    return {std::move(u), std::move(ut)};
}

Field evaluate_jet_second(const AsymptoticSolution& w, double t) {
    const auto& jets = w.jets;
    if (jets.size() < 3) return Field::zeros(jets.front().torus(), jets.front().components());
    Field utt = jets.back();
    for (std::size_t j = jets.size() - 1; j-- > 2;) utt = jets[j] + (t / static_cast<double>(j - 1)) * utt;
    return utt;
}

std::vector<double> residual_order_check(const AsymptoticSolution& w) {
    std::vector<double> out;
    const auto& torus = w.jets.front().torus();
    for (int k = 0; k <= w.order; ++k) {
        Field f_k = w.nonlinearity.is_zero() ? w.source.jet_at(k, torus, w.op.components)
                                             : composed_source(w.nonlinearity, w.jets, k);
        out.push_back((operator_jet(w.op, w.jets, k) - f_k).l2_norm());
    }
    return out;
}

double residual_scale(const AsymptoticSolution& w, int m) {
    return std::max(1.0, sobolev_norm(w.jets.front(), 2.0 * m));
}

}  // namespace horizonwave
