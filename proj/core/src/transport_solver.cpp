#include "horizonwave/transport_solver.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

#include "fft.hpp"
#include "horizonwave/errors.hpp"
#include "horizonwave/parallel.hpp"
#include "quadrature.hpp"

namespace horizonwave {
namespace {

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

std::vector<double> mode_wavenumbers(const SpatialTorus& torus, std::size_t flat) {
    const auto slots = torus.unflatten(flat);
    std::vector<double> k(slots.size());
    for (std::size_t a = 0; a < slots.size(); ++a) {
        k[a] = torus.wavenumber(static_cast<int>(a), slots[a]);
    }
    return k;
}

// Real fields Re(n e^{ikx}) and Im(n e^{ikx}) (the latter only for k != 0).
void append_kernel_fields(const SpatialTorus& torus, std::size_t flat, CVector n,
                          std::vector<Field>& out) {
    const int d = static_cast<int>(n.size());
    const std::size_t partner = torus.conjugate_slot(flat);
    if (partner == flat) {
        Eigen::Index big = 0;
        n.cwiseAbs().maxCoeff(&big);
        n *= std::conj(n(big)) / std::abs(n(big));
        Field f = Field::zeros(torus, d);
        for (int c = 0; c < d; ++c) f.coeffs(c)[flat] = n(c).real();
        out.push_back(std::move(f));
        return;
    }
    Field re = Field::zeros(torus, d);
    Field im = Field::zeros(torus, d);
    for (int c = 0; c < d; ++c) {
        re.coeffs(c)[flat] = 0.5 * n(c);
        re.coeffs(c)[partner] = 0.5 * std::conj(n(c));
        im.coeffs(c)[flat] = Complex{0.0, -0.5} * n(c);
        im.coeffs(c)[partner] = Complex{0.0, 0.5} * std::conj(n(c));
    }
    out.push_back(std::move(re));
    out.push_back(std::move(im));
}

struct ModeSolve {
    CMatrix solution;
    double magnitude = 0.0;
    double rhs_magnitude = 0.0;
    bool singular = false;
    CVector kernel;
};

ModeSolve solve_block(const CMatrix& m, const CVector& r, double threshold) {
    ModeSolve out;
    if (m.rows() == 1) {
        const Complex mult = m(0, 0);
        out.magnitude = std::abs(mult);
        out.solution = CMatrix::Zero(1, 1);
        if (out.magnitude <= threshold) {
            out.singular = true;
            out.rhs_magnitude = std::abs(r(0));
            out.kernel = CVector::Ones(1);
        } else {
            out.solution(0, 0) = r(0) / mult;
        }
        return out;
    }
    Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const Eigen::Index d = m.rows();
    out.magnitude = sv(d - 1);
    CVector u = CVector::Zero(d);
    double cokernel = 0.0;
    for (Eigen::Index i = 0; i < d; ++i) {
        const Complex proj = svd.matrixU().col(i).dot(r);
        if (sv(i) > threshold) {
            u += (proj / sv(i)) * svd.matrixV().col(i);
        } else {
            cokernel += std::norm(proj);
            if (!out.singular) out.kernel = svd.matrixV().col(i);
            out.singular = true;
        }
    }
    out.rhs_magnitude = std::sqrt(cokernel);
    out.solution = u;
    return out;
}

// Constant-coefficient mode-wise solve of A u = rhs.
TransportResult solve_constant(const OperatorMatrix& a, const Field& rhs, double threshold) {
    const auto& torus = rhs.torus();
    const int d = a.dim();
    TransportResult result{Field::zeros(torus, d), std::nullopt, std::nullopt, 0.0, 1};
    Obstruction singular{ObstructionKind::SingularModes, {}, threshold, {}};
    Obstruction near{ObstructionKind::NearSingular, {}, 1e3 * threshold, {}};
    double cokernel = 0.0;

    for (std::size_t flat = 0; flat < torus.size(); ++flat) {
        if (torus.touches_nyquist(flat)) continue;
        const auto k = mode_wavenumbers(torus, flat);
        const auto sym = a.symbol(k);
        CMatrix m(d, d);
        CVector r(d);
        for (int i = 0; i < d; ++i) {
            for (int j = 0; j < d; ++j) m(i, j) = sym[static_cast<std::size_t>(i * d + j)];
            r(i) = rhs.coeffs(i)[flat];
        }
        const auto solved = solve_block(m, r, threshold);
        for (int i = 0; i < d; ++i) result.solution.coeffs(i)[flat] = solved.solution(i, 0);
        if (solved.singular) {
            singular.modes.push_back({torus.mode_vector(flat), solved.magnitude, solved.rhs_magnitude});
            cokernel += solved.rhs_magnitude * solved.rhs_magnitude;
            if (flat <= torus.conjugate_slot(flat)) {
                append_kernel_fields(torus, flat, solved.kernel, singular.kernel_basis);
            }
        } else if (solved.magnitude <= near.threshold) {
            near.modes.push_back({torus.mode_vector(flat), solved.magnitude, solved.rhs_magnitude});
        }
    }
    result.solution.symmetrize();
    result.unsolvable_norm = std::sqrt(cokernel * torus.volume());
    if (!singular.modes.empty()) result.obstruction = std::move(singular);
    if (!near.modes.empty()) result.near_singular = std::move(near);
    return result;
}

void check_first_order(const OperatorMatrix& a) {
    for (int i = 0; i < a.dim(); ++i)
        for (int j = 0; j < a.dim(); ++j)
            if (a.at(i, j).has_second()) {
                throw ValidationError("transport operators are first order along the torus");
            }
}

double operator_scale(const OperatorMatrix& a) {
    double scale = 0.0;
    for (int i = 0; i < a.dim(); ++i) {
        for (int j = 0; j < a.dim(); ++j) {
            double c = a.at(i, j).c0;
            if (a.at(i, j).multiplier) c += a.at(i, j).multiplier->coeffs()[0].real();
            scale = std::max(scale, std::abs(c));
        }
    }
    return scale;
}

}  // namespace

bool Obstruction::unsolvable(double tol) const {
    return std::any_of(modes.begin(), modes.end(),
                       [tol](const SingularMode& m) { return m.rhs_magnitude > tol; });
}

bool Obstruction::contains(const std::vector<int>& mode) const {
    return std::any_of(modes.begin(), modes.end(),
                       [&](const SingularMode& m) { return m.mode == mode; });
}

double default_singular_threshold(double lam) { return 1e-8 * (std::abs(lam) + 1.0); }

TransportResult solve_transport(const OperatorMatrix& a, const Field& rhs,
                                std::optional<double> singular_threshold) {
    if (a.dim() != rhs.components()) {
        throw DimensionMismatch("transport operator / rhs dimension mismatch");
    }
    check_first_order(a);
    const double threshold = singular_threshold.value_or(default_singular_threshold(operator_scale(a)));

    if (!a.has_variable_part()) return solve_constant(a, rhs, threshold);
    if (a.dim() != 1) throw ValidationError("system transport needs constant coefficients");

    // Fixed point around the mean of the variable multiplier.
    const Field& m = *a.at(0, 0).multiplier;
    const double mean = m.coeffs()[0].real();
    OperatorMatrix base = a;
    base.at(0, 0).multiplier.reset();
    base.at(0, 0).c0 += mean;
    Field fluctuation = m - Field::constant(m.torus(), mean);

    TransportResult result = solve_constant(base, rhs, threshold);
    if (fluctuation.max_abs() == 0.0) return result;
    for (int iter = 1; iter <= 200; ++iter) {
        TransportResult next = solve_constant(base, rhs - multiply(fluctuation, result.solution), threshold);
        const double change = (next.solution - result.solution).l2_norm();
        next.iterations = iter + 1;
        result = std::move(next);
        if (change <= 1e-12 * std::max(1.0, result.solution.l2_norm())) return result;
    }
    throw NoConvergence("variable-beta transport iteration did not reach 1e-12 in 200 sweeps");
}

TransportResult solve_spectral(const TransportProblem& p, std::optional<double> singular_threshold) {
    if (!(p.rhs.torus() == p.torus)) throw DimensionMismatch("rhs lives on a different torus");
    if (p.rhs.components() != 1) throw DimensionMismatch("solve_spectral is scalar; use solve_system");
    if (static_cast<int>(p.v.size()) != p.torus.dims()) {
        throw DimensionMismatch("direction length does not match torus dimension");
    }
    OperatorMatrix a(1);
    a.at(0, 0) = SpatialOperator::transport(p.lam, p.v);
    double mean_beta = 0.0;
    if (p.beta) {
        mean_beta = p.beta->coeffs()[0].real();
        Field half = 0.5 * *p.beta;
        if (half.max_abs() != 0.0) a.at(0, 0).multiplier = std::move(half);
    }
    const double threshold =
        singular_threshold.value_or(default_singular_threshold(p.lam + 0.5 * mean_beta));
    return solve_transport(a, p.rhs, threshold);
}

TransportResult solve_system(const TransportProblem& p, std::optional<double> singular_threshold) {
    if (p.matrix_shift.empty()) return solve_spectral(p, singular_threshold);
    const int d = p.rhs.components();
    if (static_cast<int>(p.matrix_shift.size()) != d * d) {
        throw DimensionMismatch("matrix shift must be d x d for a d-component rhs");
    }
    if (p.beta) throw ValidationError("systems take their zeroth-order part through matrix_shift");
    OperatorMatrix a(d);
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) a.at(i, j).c0 = p.matrix_shift[static_cast<std::size_t>(i * d + j)];
        a.at(i, i).drift = p.v;
    }
    return solve_transport(a, p.rhs, singular_threshold);
}

Field solve_flow_quadrature(const SpatialTorus& torus, const std::vector<double>& v,
                            const Field& alpha, const Field& rhs, const FlowQuadrature& quad) {
    if (static_cast<int>(v.size()) != torus.dims()) {
        throw DimensionMismatch("direction length does not match torus dimension");
    }
    if (rhs.components() != 1 || alpha.components() != 1) {
        throw DimensionMismatch("flow quadrature is scalar");
    }
    const double min_alpha = alpha.min_sample();
    if (!(min_alpha > 0.0)) throw NonPositiveAlpha(min_alpha);
    if (quad.panels < 1) throw ValidationError("quadrature needs at least one panel");
    const double s_cut = quad.s_cut.value_or(-36.0 / min_alpha);
    if (!(s_cut < 0.0)) throw ValidationError("s_cut must be negative");

    const std::size_t size = torus.size();
    // omega(k) = v . k, the phase speed of mode k along the flow.
    std::vector<double> omega(size);
    for (std::size_t flat = 0; flat < size; ++flat) {
        const auto k = mode_wavenumbers(torus, flat);
        double w = 0.0;
        for (std::size_t a = 0; a < k.size(); ++a) w += v[a] * k[a];
        omega[flat] = w;
    }

    const auto rule = detail::gauss_legendre(8);
    const double h = -s_cut / quad.panels;
    const auto r_hat = rhs.coeffs();
    const auto a_hat = alpha.coeffs();
    Field fluctuation = alpha - Field::constant(torus, a_hat[0].real());
    const bool constant_alpha = fluctuation.max_abs() == 0.0;
    const double mean_alpha = a_hat[0].real();

    // Fixed chunks keep the summation order independent of the thread count.
    constexpr int chunk_panels = 64;
    const int chunks = (quad.panels + chunk_panels - 1) / chunk_panels;
    std::vector<std::vector<Complex>> partial(static_cast<std::size_t>(chunks));

    parallel_for(static_cast<std::size_t>(chunks), [&](std::size_t chunk) {
        auto& acc = partial[chunk];
        acc.assign(size, Complex{});
        std::vector<Complex> exponent(size);
        std::vector<Complex> shifted(size);
        const int first = static_cast<int>(chunk) * chunk_panels;
        const int last = std::min(quad.panels, first + chunk_panels);
        for (int panel = first; panel < last; ++panel) {
            const double left = s_cut + panel * h;
            for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
                const double s = left + 0.5 * h * (rule.nodes[q] + 1.0);
                const double w = 0.5 * h * rule.weights[q];
                if (constant_alpha) {
                    // exp(-int_s^0 alpha) = exp(alpha s); translation is a phase.
                    const double damp = w * std::exp(mean_alpha * s);
                    for (std::size_t f = 0; f < size; ++f) {
                        acc[f] += damp * std::polar(1.0, omega[f] * s) * r_hat[f];
                    }
                    continue;
                }
                // int_s^0 alpha(p + a v) da per mode, then back to the grid.
                for (std::size_t f = 0; f < size; ++f) {
                    const double om = omega[f];
                    const Complex factor = om == 0.0
                                               ? Complex{-s, 0.0}
                                               : (1.0 - std::polar(1.0, om * s)) / Complex{0.0, om};
                    exponent[f] = a_hat[f] * factor;
                    shifted[f] = r_hat[f] * std::polar(1.0, om * s);
                }
                detail::fft_backward(exponent, torus.resolution());
                detail::fft_backward(shifted, torus.resolution());
                for (std::size_t f = 0; f < size; ++f) {
                    acc[f] += w * std::exp(-exponent[f].real()) * shifted[f].real();
                }
            }
        }
    });

    std::vector<Complex> total(size, Complex{});
    for (const auto& part : partial)
        for (std::size_t f = 0; f < size; ++f) total[f] += part[f];

    if (constant_alpha) return Field::from_coefficients(torus, 1, std::move(total));
    std::vector<double> samples(size);
    for (std::size_t f = 0; f < size; ++f) samples[f] = total[f].real();
    return Field::from_samples(torus, samples);
}

}  // namespace horizonwave
