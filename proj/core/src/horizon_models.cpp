#include "horizonwave/horizon_models.hpp"

#include <cmath>
#include <numeric>

#include "horizonwave/errors.hpp"

namespace horizonwave {
namespace {

std::vector<double> monomial(int m) {
    std::vector<double> series(static_cast<std::size_t>(m + 1), 0.0);
    series.back() = 1.0;
    return series;
}

std::function<double(double)> power_law(int m) {
    return [m](double t) { return std::pow(t, m); };
}

// Orthonormal basis of the complement of unit vector e (Gram-Schmidt against
// the coordinate axes).
std::vector<std::vector<double>> complement_frame(const std::vector<double>& e) {
    const std::size_t n = e.size();
    std::vector<std::vector<double>> frame;
    std::vector<std::vector<double>> basis{e};
    for (std::size_t axis = 0; axis < n && frame.size() + 1 < n; ++axis) {
        std::vector<double> w(n, 0.0);
        w[axis] = 1.0;
        for (const auto& b : basis) {
            const double proj = std::inner_product(w.begin(), w.end(), b.begin(), 0.0);
            for (std::size_t i = 0; i < n; ++i) w[i] -= proj * b[i];
        }
        const double norm = std::sqrt(std::inner_product(w.begin(), w.end(), w.begin(), 0.0));
        if (norm < 1e-8) continue;
        for (auto& x : w) x /= norm;
        basis.push_back(w);
        frame.push_back(w);
    }
    return frame;
}

std::vector<double> projector(const std::vector<std::vector<double>>& frame, std::size_t n) {
    std::vector<double> p(n * n, 0.0);
    for (const auto& e : frame)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) p[i * n + j] += e[i] * e[j];
    return p;
}

}  // namespace

FlatMetric HorizonModel::sigma() const {
    const auto n = static_cast<std::size_t>(dims());
    // At t = 0: g restricted to H is gbar (theta^2 carries psi(0) = 0); add theta x theta.
    FlatMetric s;
    s.g = gbar;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) s.g[i * n + j] += theta[i] * theta[j];
    return s;
}

HorizonModel make_misner(Sign sign, double period, int resolution) {
    HorizonModel model{
        .name = sign == Sign::Plus ? "misner+" : "misner-",
        .torus = SpatialTorus::circle(period, resolution),
        .psi_series = {0.0, 1.0},
        .psi = [](double t) { return t; },
        .generator = {sign == Sign::Plus ? -2.0 : 2.0},
        .z_direction = {sign == Sign::Plus ? 1.0 : -1.0},
        .transverse_frame = {},
        .gbar = {0.0},
        .theta = {sign == Sign::Plus ? 1.0 : -1.0},
        .surface_gravity = 1.0,
    };
    return model;
}

HorizonModel make_generalized_misner(int m, int transverse_dims, std::vector<double> periods,
                                     std::vector<int> resolution) {
    if (m < 1) throw ValidationError("generalized Misner needs m >= 1");
    if (transverse_dims < 0) throw ValidationError("transverse_dims must be >= 0");
    const auto n = static_cast<std::size_t>(transverse_dims + 1);
    if (periods.size() != n || resolution.size() != n) {
        throw ValidationError("generalized Misner: periods/resolution must have length " +
                              std::to_string(n));
    }
    HorizonModel model;
    model.name = m == 1 && transverse_dims == 0 ? "misner+" : "generalized_misner";
    model.torus = SpatialTorus(std::move(periods), std::move(resolution));
    model.psi_series = monomial(m);
    model.psi = m == 1 ? std::function<double(double)>([](double t) { return t; }) : power_law(m);
    model.generator.assign(n, 0.0);
    model.generator[0] = -2.0;
    model.z_direction.assign(n, 0.0);
    model.z_direction[0] = 1.0;
    model.theta = model.z_direction;
    for (std::size_t a = 1; a < n; ++a) {
        std::vector<double> e(n, 0.0);
        e[a] = 1.0;
        model.transverse_frame.push_back(e);
    }
    model.gbar = projector(model.transverse_frame, n);
    model.surface_gravity = m == 1 ? 1.0 : 0.0;
    return model;
}

HorizonModel make_torus_quotient(std::vector<double> v, std::vector<double> periods,
                                 std::vector<int> resolution) {
    const double norm = std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
    if (!(norm > 0.0)) throw ValidationError("torus quotient needs a non-zero generator direction");
    if (periods.size() != v.size() || resolution.size() != v.size()) {
        throw ValidationError("torus quotient: direction/periods/resolution lengths differ");
    }
    const std::size_t n = v.size();
    HorizonModel model;
    model.name = "torus_quotient";
    model.torus = SpatialTorus(std::move(periods), std::move(resolution));
    model.psi_series = {0.0, 1.0};
    model.psi = [](double t) { return t; };
    model.z_direction.resize(n);
    model.generator.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        model.z_direction[i] = -v[i] / norm;
        model.generator[i] = 2.0 * v[i] / norm;
    }
    model.theta = model.z_direction;
    model.transverse_frame = complement_frame(model.z_direction);
    model.gbar = projector(model.transverse_frame, n);
    model.surface_gravity = 1.0;
    return model;
}

NullFormData null_form_data(const HorizonModel& model, int taylor_order) {
    if (taylor_order < 1) throw ValidationError("null_form_data needs taylor_order >= 1");
    NullFormData data;
    for (int j = 0; j <= taylor_order; ++j) {
        const double c = static_cast<std::size_t>(j) < model.psi_series.size()
                             ? model.psi_series[static_cast<std::size_t>(j)]
                             : 0.0;
        data.psi_taylor.push_back(Field::constant(model.torus, c));
    }
    data.z_direction = model.z_direction;
    data.gbar = model.gbar;
    data.kappa = model.surface_gravity;
    return data;
}

BoxNormalForm box_normal_form(const HorizonModel& model) {
    BoxNormalForm box;
    box.psi = model.psi_series;
    const auto n = static_cast<std::size_t>(model.dims());

    // L1 = psi'(t) - 2 d_Z: series of psi' plus the drift at order 0.
    const std::size_t l1_len = std::max<std::size_t>(1, box.psi.size() - 1);
    box.l1.assign(l1_len, OperatorMatrix(1));
    for (std::size_t j = 1; j < box.psi.size(); ++j) {
        box.l1[j - 1].at(0, 0).c0 = static_cast<double>(j) * box.psi[j];
    }
    std::vector<double> drift(n);
    for (std::size_t i = 0; i < n; ++i) drift[i] = -2.0 * model.z_direction[i];
    box.l1[0].at(0, 0).drift = drift;

    // L2 = -Delta_E = -sum_j (e_j . grad)^2.
    box.l2.assign(1, OperatorMatrix(1));
    if (!model.transverse_frame.empty()) {
        auto second = model.gbar;
        for (auto& x : second) x = -x;
        box.l2[0].at(0, 0).second = second;
    }
    return box;
}

}  // namespace horizonwave
