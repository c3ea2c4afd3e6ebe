#include <doctest.h>

#include <cmath>

#include "horizonwave/errors.hpp"
#include "horizonwave/parallel.hpp"
#include "horizonwave/transport_solver.hpp"
#include "support.hpp"

using namespace horizonwave;
using namespace hw_test;

namespace {

const SpatialTorus kCircle = SpatialTorus::circle(2 * kPi, 32);

TransportProblem scalar_problem(const SpatialTorus& t, std::vector<double> v, double lam, Field rhs) {
    return TransportProblem{t, std::move(v), lam, std::nullopt, std::move(rhs), {}};
}

// d_v u + (lam + beta/2) u - rhs
Field transport_residual(const TransportProblem& p, const Field& u) {
    Field r = directional_derivative(u, p.v) + p.lam * u - p.rhs;
    if (p.beta) r += multiply(0.5 * *p.beta, u);
    return r;
}

}  // namespace

TEST_CASE("spectral examples on S^1") {
    auto p = scalar_problem(kCircle, {-2.0}, 1.0, Field::constant(kCircle, 1.0));
    auto r = solve_spectral(p);
    CHECK_FALSE(r.obstruction);
    CHECK(max_diff(r.solution, Field::constant(kCircle, 1.0)) <= 1e-15);

    p.rhs = cos_x(kCircle);
    r = solve_spectral(p);
    const Field expected = 0.2 * (cos_x(kCircle) - 2.0 * sin_x(kCircle));
    CHECK(max_diff(r.solution, expected) <= 1e-14);
    // Substitution: -2 u' + u = cos x.
    CHECK(max_diff(-2.0 * derivative(expected, 0) + expected, cos_x(kCircle)) <= 1e-14);
}

TEST_CASE("lam = 0 on constants is an obstruction at mode 0") {
    auto p = scalar_problem(kCircle, {-2.0}, 0.0, Field::constant(kCircle, 1.0));
    const auto r = solve_spectral(p);
    REQUIRE(r.obstruction);
    CHECK(r.obstruction->kind == ObstructionKind::SingularModes);
    REQUIRE(r.obstruction->modes.size() == 1);
    CHECK(r.obstruction->modes[0].mode == std::vector<int>{0});
    CHECK(r.obstruction->modes[0].rhs_magnitude == doctest::Approx(1.0));
    CHECK(r.obstruction->unsolvable(1e-12));
    CHECK(r.unsolvable_norm == doctest::Approx(std::sqrt(2 * kPi)));
    REQUIRE(r.obstruction->kernel_basis.size() == 1);
    CHECK(max_diff(r.obstruction->kernel_basis[0], Field::constant(kCircle, 1.0)) <= 1e-15);
    CHECK(r.solution.max_abs() == 0.0);

    // Mean-free rhs sits in the range: kernel only.
    p.rhs = cos_x(kCircle);
    const auto k = solve_spectral(p);
    REQUIRE(k.obstruction);
    CHECK_FALSE(k.obstruction->unsolvable(1e-12));
    CHECK(transport_residual(p, k.solution).l2_norm() <= 1e-13);
}

TEST_CASE("residual below 1e-10 relative whenever no obstruction is reported") {
    for (unsigned seed = 0; seed < 10; ++seed) {
        const SpatialTorus t({2 * kPi, 2 * kPi}, {32, 32});
        auto p = scalar_problem(t, {1.0, kGolden}, 0.5 + seed, random_field(t, seed, 8));
        const auto r = solve_spectral(p);
        CHECK_FALSE(r.obstruction);
        CHECK(transport_residual(p, r.solution).l2_norm() <= 1e-10 * p.rhs.l2_norm());
    }
}

TEST_CASE("irrational direction: smallest multiplier is lam, at mode 0") {
    const SpatialTorus t({2 * kPi, 2 * kPi}, {64, 64});
    const double lam = 1.0;
    double smallest = 1e9;
    std::vector<int> where;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (t.touches_nyquist(i)) continue;
        const auto mode = t.mode_vector(i);
        const double w = mode[0] + kGolden * mode[1];
        const double mag = std::abs(Complex{lam, w});
        if (mag < smallest) {
            smallest = mag;
            where = mode;
        }
    }
    CHECK(smallest == lam);
    CHECK(where == std::vector<int>{0, 0});
    auto p = scalar_problem(t, {1.0, kGolden}, lam, random_field(t, 77, 20));
    const auto r = solve_spectral(p);
    CHECK_FALSE(r.obstruction);
    CHECK_FALSE(r.near_singular);
}

TEST_CASE("irrational direction with lam = 0: only mode 0 is singular") {
    const SpatialTorus t({2 * kPi, 2 * kPi}, {32, 32});
    auto p = scalar_problem(t, {1.0, kGolden}, 0.0, random_field(t, 5, 6));
    const auto r = solve_spectral(p);
    REQUIRE(r.obstruction);
    CHECK(r.obstruction->modes.size() == 1);
    CHECK(r.obstruction->contains({0, 0}));
}

TEST_CASE("variable beta is solved by the mean-preconditioned iteration") {
    auto p = scalar_problem(kCircle, {-2.0}, 1.0, random_field(kCircle, 9, 5));
    p.beta = Field::constant(kCircle, 1.0) + 0.8 * cos_x(kCircle);
    const auto r = solve_spectral(p);
    CHECK_FALSE(r.obstruction);
    CHECK(r.iterations > 1);
    CHECK(transport_residual(p, r.solution).l2_norm() <= 1e-10 * p.rhs.l2_norm());

    // Independent check through the flow integral with alpha = lam + beta / 2.
    const Field alpha = Field::constant(kCircle, p.lam) + 0.5 * *p.beta;
    const Field q = solve_flow_quadrature(kCircle, p.v, alpha, p.rhs);
    CHECK(max_diff(q, r.solution) <= 1e-8);
}

TEST_CASE("flow quadrature examples") {
    const Field one = Field::constant(kCircle, 1.0);
    const Field q = solve_flow_quadrature(kCircle, {-2.0}, one, cos_x(kCircle));
    CHECK(max_diff(q, 0.2 * (cos_x(kCircle) - 2.0 * sin_x(kCircle))) <= 1e-12);
    const Field c = solve_flow_quadrature(kCircle, {-2.0}, one, Field::constant(kCircle, 2.5));
    CHECK(max_diff(c, Field::constant(kCircle, 2.5)) <= 1e-13);
    CHECK_THROWS_AS(solve_flow_quadrature(kCircle, {-2.0}, cos_x(kCircle), one), NonPositiveAlpha);
}

TEST_CASE("backend agreement on S^1 and on T^2 with an irrational direction") {
    const SpatialTorus t2({2 * kPi, 2 * kPi}, {32, 32});
    for (unsigned seed = 0; seed < 20; ++seed) {
        const Field r1 = random_field(kCircle, 500 + seed, 10);
        const auto s1 = solve_spectral(scalar_problem(kCircle, {-2.0}, 1.0, r1));
        const Field q1 = solve_flow_quadrature(kCircle, {-2.0}, Field::constant(kCircle, 1.0), r1);
        CHECK(max_diff(s1.solution, q1) <= 1e-8);

        const Field r2 = random_field(t2, 600 + seed, 6);
        const std::vector<double> v{1.0, kGolden};
        const auto s2 = solve_spectral(scalar_problem(t2, v, 1.0, r2));
        const Field q2 = solve_flow_quadrature(t2, v, Field::constant(t2, 1.0), r2);
        CHECK(max_diff(s2.solution, q2) <= 1e-8);
    }
}

TEST_CASE("solve_system") {
    const Field r = random_field(kCircle, 31, 6);
    auto scalar = scalar_problem(kCircle, {-2.0}, 1.5, r);
    auto as_system = scalar;
    as_system.matrix_shift = {1.5};
    CHECK(max_diff(solve_system(as_system).solution, solve_spectral(scalar).solution) <= 1e-15);

    // Decoupled shift lam I matches componentwise scalar solves.
    const Field r2 = random_field(kCircle, 32, 6);
    TransportProblem sys{kCircle, {-2.0}, 0.0, std::nullopt, Field::from_components({r, r2}), {0.7, 0.0, 0.0, 0.7}};
    const auto s = solve_system(sys);
    CHECK_FALSE(s.obstruction);
    CHECK(max_diff(s.solution.component(0), solve_spectral(scalar_problem(kCircle, {-2.0}, 0.7, r)).solution) <= 1e-14);
    CHECK(max_diff(s.solution.component(1), solve_spectral(scalar_problem(kCircle, {-2.0}, 0.7, r2)).solution) <= 1e-14);

    // TM block at order 0: diag(0, 2) shift, singular at mode 0 with kernel (1, 0).
    TransportProblem tm{kCircle, {-2.0}, 0.0, std::nullopt, Field::from_components({cos_x(kCircle), Field::constant(kCircle, 1.0)}), {0.0, 0.0, 0.0, 2.0}};
    const auto o = solve_system(tm);
    REQUIRE(o.obstruction);
    CHECK(o.obstruction->modes.size() == 1);
    CHECK(o.obstruction->contains({0}));
    CHECK(o.obstruction->modes[0].magnitude == 0.0);
    REQUIRE(o.obstruction->kernel_basis.size() == 1);
    const Field& kernel = o.obstruction->kernel_basis[0];
    CHECK(std::abs(std::abs(kernel.coeffs(0)[0].real()) - 1.0) <= 1e-14);
    CHECK(kernel.component(1).max_abs() <= 1e-14);
    CHECK_THROWS_AS(solve_system(TransportProblem{kCircle, {-2.0}, 0.0, std::nullopt, r, {1.0, 0.0, 0.0, 1.0}}), DimensionMismatch);
}

TEST_CASE("flow quadrature is bit-identical for any worker count") {
    const SpatialTorus t2({2 * kPi, 2 * kPi}, {16, 16});
    const Field r = random_field(t2, 77, 5);
    const Field alpha = Field::constant(t2, 1.0) + 0.3 * random_nonnegative(t2, 78, 2);
    const int saved = max_threads();
    set_max_threads(1);
    const Field serial = solve_flow_quadrature(t2, {1.0, kGolden}, alpha, r);
    set_max_threads(4);
    const Field threaded = solve_flow_quadrature(t2, {1.0, kGolden}, alpha, r);
    set_max_threads(saved);
    CHECK(serial.data() == threaded.data());
}
