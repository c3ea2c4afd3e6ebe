#include <doctest.h>

#include <cmath>

#include "horizonwave/errors.hpp"
#include "horizonwave/horizon_models.hpp"
#include "support.hpp"

using namespace horizonwave;
using namespace hw_test;

TEST_CASE("Misner+ carries psi = t from the inverse coordinate metric") {
    const auto model = make_misner(Sign::Plus, 2 * kPi, 64);
    for (double t : {0.0, 0.3, 2.0}) {
        // g = [[0, 1], [1, t]] in (t, x); psi = -g^{tt}.
        const double det = 0.0 * t - 1.0;
        const double g_tt_inv = t / det;
        CHECK(model.psi(t) == doctest::Approx(-g_tt_inv));
    }
    const auto data = null_form_data(model, 3);
    REQUIRE(data.psi_taylor.size() == 4);
    const double expected[] = {0.0, 1.0, 0.0, 0.0};
    for (int j = 0; j < 4; ++j) {
        CHECK(data.psi_taylor[static_cast<std::size_t>(j)].max_abs() == doctest::Approx(expected[j]));
    }
    CHECK(model.generator == std::vector<double>{-2.0});
    CHECK(model.surface_gravity == 1.0);
    CHECK_FALSE(model.degenerate());
}

TEST_CASE("Misner- flips the generator") {
    const auto model = make_misner(Sign::Minus, 2 * kPi, 64);
    CHECK(model.generator == std::vector<double>{2.0});
    CHECK(model.psi(0.7) == doctest::Approx(0.7));
}

TEST_CASE("constructors reject bad input") {
    CHECK_THROWS_AS(make_misner(Sign::Plus, 0.0, 64), ValidationError);
    CHECK_THROWS_AS(make_misner(Sign::Plus, 2 * kPi, 63), ValidationError);
    CHECK_THROWS_AS(make_generalized_misner(0, 0, {2 * kPi}, {16}), ValidationError);
    CHECK_THROWS_AS(make_torus_quotient({0.0, 0.0}, {1.0, 1.0}, {8, 8}), ValidationError);
    CHECK_THROWS_AS(null_form_data(make_misner(Sign::Plus, 1.0, 8), 0), ValidationError);
}

TEST_CASE("t^4 model is degenerate with monomial Taylor data") {
    const auto model = make_generalized_misner(4, 0, {2 * kPi}, {64});
    CHECK(model.degenerate());
    const auto data = null_form_data(model, 4);
    const double expected[] = {0.0, 0.0, 0.0, 0.0, 1.0};
    for (int j = 0; j < 5; ++j) {
        CHECK(data.psi_taylor[static_cast<std::size_t>(j)].max_abs() == expected[j]);
    }
    CHECK(data.kappa == 0.0);
    CHECK(model.psi(0.5) == doctest::Approx(0.0625));
}

TEST_CASE("m = 1 generalized Misner is bit-identical to Misner+") {
    const auto a = make_generalized_misner(1, 0, {2 * kPi}, {64});
    const auto b = make_misner(Sign::Plus, 2 * kPi, 64);
    const auto da = null_form_data(a, 5);
    const auto db = null_form_data(b, 5);
    for (std::size_t j = 0; j < da.psi_taylor.size(); ++j) {
        CHECK(da.psi_taylor[j].data() == db.psi_taylor[j].data());
    }
    CHECK(da.z_direction == db.z_direction);
    CHECK(da.gbar == db.gbar);
    CHECK(da.kappa == db.kappa);
    CHECK(a.generator == b.generator);
    CHECK(a.torus == b.torus);
}

TEST_CASE("2+1 model with psi = t^2 and gbar = dy^2") {
    const auto model = make_generalized_misner(2, 1, {2 * kPi, 2 * kPi}, {64, 64});
    CHECK(model.dims() == 2);
    CHECK(model.gbar == std::vector<double>{0.0, 0.0, 0.0, 1.0});
    CHECK(model.psi(0.5) == doctest::Approx(0.25));
    CHECK(model.degenerate());
}

TEST_CASE("torus quotient: sigma is the identity and irrational generators are dense") {
    const auto dense = make_torus_quotient({-2.0, -2.0 * kGolden}, {2 * kPi, 2 * kPi}, {64, 64});
    const auto closed = make_torus_quotient({-2.0, 0.0}, {2 * kPi, 2 * kPi}, {64, 64});
    for (const auto* model : {&dense, &closed}) {
        const auto sigma = model->sigma();
        CHECK(sigma.g[0] == doctest::Approx(1.0));
        CHECK(sigma.g[3] == doctest::Approx(1.0));
        CHECK(std::abs(sigma.g[1]) <= 1e-15);
        CHECK(std::abs(sigma.g[2]) <= 1e-15);
        double vv = 0.0;
        for (double x : model->generator) vv += x * x;
        // sigma(V, V) = |v|^2 for the flat representation.
        CHECK(vv == doctest::Approx(4.0));
    }
    CHECK(closed.generator[0] == doctest::Approx(-2.0));
    CHECK(std::abs(closed.generator[1]) <= 1e-15);

    // Orbit of the origin passes within 0.1 of every point of a coarse grid.
    const double two_pi = 2 * kPi;
    for (int i = 0; i < 6; ++i) {
        for (int j = 0; j < 6; ++j) {
            const double px = two_pi * i / 6;
            const double py = two_pi * j / 6;
            double best = 1e9;
            for (int s = 0; s < 200000; ++s) {
                const double time = 0.01 * s;
                const double x = std::fmod(time * std::abs(dense.generator[0]), two_pi);
                const double y = std::fmod(time * std::abs(dense.generator[1]), two_pi);
                const double dx = std::min(std::abs(x - px), two_pi - std::abs(x - px));
                const double dy = std::min(std::abs(y - py), two_pi - std::abs(y - py));
                best = std::min(best, std::hypot(dx, dy));
            }
            CHECK(best < 0.1);
        }
    }
}

TEST_CASE("built-in non-degenerate models have psi_0 = 0 < psi_1") {
    const HorizonModel models[] = {make_misner(Sign::Plus, 1.0, 8), make_misner(Sign::Minus, 1.0, 8),
                                   make_generalized_misner(1, 1, {1.0, 2.0}, {8, 8}),
                                   make_torus_quotient({1.0, kGolden}, {1.0, 1.0}, {8, 8})};
    for (const auto& m : models) {
        const auto data = null_form_data(m, 2);
        CHECK(data.psi_taylor[0].max_abs() == 0.0);
        CHECK(data.psi_taylor[1].min_sample() > 0.0);
    }
}
