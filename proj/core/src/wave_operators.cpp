#include "horizonwave/wave_operators.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

#include "horizonwave/errors.hpp"

namespace horizonwave {
namespace {

// k! / (k - i)!
double falling_factorial(int k, int i) {
    double r = 1.0;
    for (int j = 0; j < i; ++j) r *= static_cast<double>(k - j);
    return r;
}

void attach_closed_forms(OperatorSpec& op) {
    auto psi_series = op.psi_taylor;
    auto model_psi = op.model.psi;
    op.psi = model_psi ? model_psi : [psi_series](double t) { return evaluate_series(psi_series, t); };
    auto l1 = op.l1_taylor;
    auto l2 = op.l2_taylor;
    op.l1 = [l1](double t) { return evaluate_series(l1, t); };
    op.l2 = [l2](double t) { return evaluate_series(l2, t); };
}

std::vector<double> endomorphism_at_horizon(const OperatorSpec& op) {
    const int d = op.components;
    const double psi1 = op.psi_coeff(1);
    std::vector<double> b(static_cast<std::size_t>(d * d), 0.0);
    const auto* l10 = op.l1_coeff(0);
    for (int r = 0; r < d; ++r) {
        for (int c = 0; c < d; ++c) {
            const double entry = l10 ? l10->at(r, c).c0 : 0.0;
            b[static_cast<std::size_t>(r * d + c)] = -(entry - (r == c ? psi1 : 0.0));
        }
    }
    return b;
}

}  // namespace

double OperatorSpec::psi_coeff(std::size_t j) const {
    return j < psi_taylor.size() ? psi_taylor[j] : 0.0;
}

const OperatorMatrix* OperatorSpec::l1_coeff(std::size_t j) const {
    return j < l1_taylor.size() ? &l1_taylor[j] : nullptr;
}

const OperatorMatrix* OperatorSpec::l2_coeff(std::size_t j) const {
    return j < l2_taylor.size() ? &l2_taylor[j] : nullptr;
}

OperatorSpec scalar_operator(const HorizonModel& model, const WaveVectorField& w,
                             const std::vector<Coefficient>& alpha) {
    auto box = box_normal_form(model);
    OperatorSpec op;
    op.label = "scalar";
    op.model = model;
    op.components = 1;
    op.psi_taylor = box.psi;
    op.l1_taylor = std::move(box.l1);
    op.l2_taylor = std::move(box.l2);

    if (op.l1_taylor.size() < w.w_t.size()) op.l1_taylor.resize(w.w_t.size(), OperatorMatrix(1));
    for (std::size_t j = 0; j < w.w_t.size(); ++j) {
        op.l1_taylor[j].at(0, 0) += w.w_t[j].as_multiplication();
    }
    if (op.l2_taylor.size() < alpha.size()) op.l2_taylor.resize(alpha.size(), OperatorMatrix(1));
    for (std::size_t j = 0; j < alpha.size(); ++j) {
        op.l2_taylor[j].at(0, 0) += alpha[j].as_multiplication();
    }
    if (!w.w_spatial.empty()) {
        if (static_cast<int>(w.w_spatial.size()) != model.dims()) {
            throw DimensionMismatch("W spatial part does not match torus dimension");
        }
        op.l2_taylor[0].at(0, 0) += SpatialOperator::transport(0.0, w.w_spatial);
    }
    op.beta = w.w_t.empty() ? Coefficient{0.0} : w.w_t.front();
    attach_closed_forms(op);
    op.b_endo = endomorphism_at_horizon(op);
    return op;
}

OperatorSpec system_operator(const HorizonModel& model, std::vector<OperatorMatrix> l1_taylor,
                             std::vector<OperatorMatrix> l2_taylor, int d) {
    if (d < 1) throw ValidationError("system dimension must be >= 1");
    if (l1_taylor.empty()) l1_taylor.emplace_back(d);
    if (l2_taylor.empty()) l2_taylor.emplace_back(d);
    for (const auto& m : l1_taylor) {
        if (m.dim() != d) throw DimensionMismatch("L1 coefficient has wrong matrix size");
    }
    for (const auto& m : l2_taylor) {
        if (m.dim() != d) throw DimensionMismatch("L2 coefficient has wrong matrix size");
    }
    OperatorSpec op;
    op.label = "system";
    op.model = model;
    op.components = d;
    op.psi_taylor = model.psi_series;
    op.l1_taylor = std::move(l1_taylor);
    op.l2_taylor = std::move(l2_taylor);
    attach_closed_forms(op);
    op.b_endo = endomorphism_at_horizon(op);
    if (d == 1) {
        const auto& l10 = op.l1_taylor.front().at(0, 0);
        op.beta = Coefficient{l10.c0 - op.psi_coeff(1)};
        if (l10.multiplier) op.beta->variable = l10.multiplier;
    }
    return op;
}

OperatorSpec tm_connection_laplacian(const HorizonModel& model) {
    if (model.dims() != 1 || model.psi_series != std::vector<double>{0.0, 1.0} ||
        model.z_direction.front() != 1.0) {
        throw ValidationError("tm_connection_laplacian is defined on Misner+ only");
    }
    // Frame components u = a d_t + b d_x; Christoffels of 2 dt dx + t dx^2.
    OperatorMatrix l1(2);
    l1.at(0, 0) = SpatialOperator::transport(0.0, {-2.0});
    l1.at(1, 1) = SpatialOperator::transport(2.0, {-2.0});
    OperatorMatrix l2(2);
    l2.at(0, 1) = SpatialOperator::transport(0.0, {-1.0});
    auto op = system_operator(model, {l1}, {l2}, 2);
    op.label = "tm_connection_laplacian";
    return op;
}

OperatorSpec operator_preset(const HorizonModel& model, const std::string& name) {
    WaveVectorField w;
    std::vector<Coefficient> alpha;
    if (name == "box") {
    } else if (name == "box_plus_one") {
        alpha = {1.0};
    } else if (name == "box_minus_dt") {
        w.w_t = {-1.0};
    } else if (name == "box_minus_dt_plus_one") {
        w.w_t = {-1.0};
        alpha = {1.0};
    } else if (name == "ce26_box_minus_2t_plus_1") {
        alpha = {-1.0, -2.0};
    } else if (name == "tm_connection_laplacian") {
        return tm_connection_laplacian(model);
    } else {
        throw ValidationError("unknown operator preset '" + name + "'");
    }
    auto op = scalar_operator(model, w, alpha);
    op.label = name;
    return op;
}

std::vector<std::string> operator_preset_names() {
    return {"box",          "box_plus_one",           "box_minus_dt", "box_minus_dt_plus_one",
            "tm_connection_laplacian", "ce26_box_minus_2t_plus_1"};
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::Admissible: return "Admissible";
        case Verdict::NonAdmissible: return "NonAdmissible";
        case Verdict::DegenerateSurfaceGravity: return "DegenerateSurfaceGravity";
    }
    return "?";
}

Admissibility admissibility_check(const OperatorSpec& op, const std::vector<double>& fiber_metric) {
    Admissibility result;
    if (op.model.degenerate()) {
        result.verdict = Verdict::DegenerateSurfaceGravity;
        result.detail = "surface gravity vanishes; d_t psi(0) = 0";
        return result;
    }
    const auto& torus = op.model.torus;
    if (op.components == 1 && op.beta) {
        std::vector<double> beta(torus.size(), op.beta->constant);
        if (op.beta->variable) {
            const auto var = op.beta->variable->samples();
            for (std::size_t i = 0; i < beta.size(); ++i) beta[i] += var[i];
        }
        const auto it = std::min_element(beta.begin(), beta.end());
        // Rounding in a sampled variable part should not flip the verdict.
        if (*it < -1e-13) {
            result.verdict = Verdict::NonAdmissible;
            result.witness_point = torus.point(static_cast<std::size_t>(it - beta.begin()));
            result.witness_value = *it;
            result.detail = "W|_H points outward (beta < 0)";
        }
        return result;
    }

    const int d = op.components;
    Eigen::MatrixXd a = Eigen::MatrixXd::Identity(d, d);
    if (!fiber_metric.empty()) {
        if (static_cast<int>(fiber_metric.size()) != d * d) {
            throw DimensionMismatch("fiber metric must be d x d");
        }
        for (int r = 0; r < d; ++r)
            for (int c = 0; c < d; ++c) a(r, c) = fiber_metric[static_cast<std::size_t>(r * d + c)];
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> check(0.5 * (a + a.transpose()));
        if (check.eigenvalues().minCoeff() <= 0.0) {
            throw ValidationError("fiber metric must be positive definite");
        }
    }
    Eigen::MatrixXd b(d, d);
    for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) b(r, c) = op.b_endo[static_cast<std::size_t>(r * d + c)];
    const Eigen::MatrixXd ab = a * b;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (ab + ab.transpose()));
    const double worst = eig.eigenvalues().maxCoeff();
    if (worst > 1e-13) {
        result.verdict = Verdict::NonAdmissible;
        result.witness_point = torus.point(0);
        result.witness_value = worst;
        result.detail = "a(B(g(V,.) x w), w) > 0 for some w";
    }
    return result;
}

Field operator_jet(const OperatorSpec& op, std::span<const Field> jets, int k) {
    if (jets.empty()) throw ValidationError("operator_jet needs at least u_0");
    if (k > op.taylor_order) throw OrderShortfall("operator Taylor data", k, op.taylor_order);
    const auto jet = [&](int j) -> const Field* {
        return j >= 0 && static_cast<std::size_t>(j) < jets.size() ? &jets[static_cast<std::size_t>(j)]
                                                                   : nullptr;
    };
    Field acc = Field::zeros(jets.front().torus(), jets.front().components());
    for (int i = 0; i <= k; ++i) {
        const double w = falling_factorial(k, i);
        if (const double p = op.psi_coeff(static_cast<std::size_t>(i)); p != 0.0) {
            if (const auto* u = jet(k - i + 2)) acc += (w * p) * *u;
        }
        if (const auto* l1 = op.l1_coeff(static_cast<std::size_t>(i)); l1 && !l1->is_zero()) {
            if (const auto* u = jet(k - i + 1)) acc += w * l1->apply(*u);
        }
        if (const auto* l2 = op.l2_coeff(static_cast<std::size_t>(i)); l2 && !l2->is_zero()) {
            if (const auto* u = jet(k - i)) acc += w * l2->apply(*u);
        }
    }
    return acc;
}

TransportFamily horizon_transport_family(const OperatorSpec& op, int k) {
    if (k < 0) throw ValidationError("transport order must be >= 0");
    if (k + 1 > op.taylor_order) throw OrderShortfall("operator Taylor data", k + 1, op.taylor_order);
    if (op.psi_coeff(0) != 0.0) {
        throw ValidationError("psi(0) != 0: t = 0 is not a horizon of this operator");
    }
    TransportFamily family;
    family.k = k;
    family.a_k = OperatorMatrix::identity(op.components, k * op.psi_coeff(1));
    if (const auto* l10 = op.l1_coeff(0)) family.a_k += *l10;

    family.rhs = [op, k](std::span<const Field> jets, const Field& f_k) {
        if (static_cast<int>(jets.size()) < k + 1) {
            throw OrderShortfall("transport rhs jets", k, static_cast<int>(jets.size()) - 1);
        }
        // Everything in d_t^k(P w)|_0 except the u_{k+1} term.
        const auto lower = jets.subspan(0, static_cast<std::size_t>(k + 1));
        return f_k - operator_jet(op, lower, k);
    };
    return family;
}

Field interior_apply(const OperatorSpec& op, double t, const Field& u, const Field& ut,
                     const std::optional<Field>& f_ext) {
    const double psi = op.psi(t);
    if (!(std::abs(psi) >= 1e-300)) throw DegenerateDivision(t);
    Field rhs = -(op.l1(t).apply(ut) + op.l2(t).apply(u));
    if (f_ext) rhs += *f_ext;
    return rhs * (1.0 / psi);
}

Field apply_operator(const OperatorSpec& op, double t, const Field& u, const Field& ut,
                     const Field& utt) {
    return op.psi(t) * utt + op.l1(t).apply(ut) + op.l2(t).apply(u);
}

double spectral_rate(const OperatorSpec& op, double t) {
    const double psi = op.psi(t);
    if (!(psi > 0.0)) throw DegenerateDivision(t);
    const auto& torus = op.model.torus;
    const auto l1 = op.l1(t);
    const auto l2 = op.l2(t);
    const int d = op.components;
    const int n = torus.dims();

    auto row_norm = [d](const std::vector<Complex>& m) {
        double worst = 0.0;
        for (int r = 0; r < d; ++r) {
            double s = 0.0;
            for (int c = 0; c < d; ++c) s += std::abs(m[static_cast<std::size_t>(r * d + c)]);
            worst = std::max(worst, s);
        }
        return worst;
    };
    auto variable_bound = [d](const OperatorMatrix& m) {
        double bound = 0.0;
        for (int r = 0; r < d; ++r)
            for (int c = 0; c < d; ++c)
                if (m.at(r, c).multiplier) bound += m.at(r, c).multiplier->max_abs();
        return bound;
    };

    double l1max = 0.0;
    double l2max = 0.0;
    std::vector<double> k(static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < torus.size(); ++i) {
        if (torus.touches_nyquist(i)) continue;
        const auto slots = torus.unflatten(i);
        for (int a = 0; a < n; ++a) k[static_cast<std::size_t>(a)] = torus.wavenumber(a, slots[a]);
        l1max = std::max(l1max, row_norm(l1.symbol(k)));
        l2max = std::max(l2max, row_norm(l2.symbol(k)));
    }
    l1max += variable_bound(l1);
    l2max += variable_bound(l2);
    return l1max / psi + std::sqrt(l2max / psi);
}

}  // namespace horizonwave
