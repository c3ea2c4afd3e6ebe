#include <doctest.h>

#include <cmath>

#include "horizonwave/errors.hpp"
#include "horizonwave/wave_operators.hpp"
#include "support.hpp"

using namespace horizonwave;
using namespace hw_test;

namespace {

HorizonModel misner() { return make_misner(Sign::Plus, 2 * kPi, 32); }

std::vector<Field> random_jets(const SpatialTorus& t, int count, unsigned seed, int components = 1) {
    std::vector<Field> out;
    for (int j = 0; j < count; ++j) {
        std::vector<Field> parts;
        for (int c = 0; c < components; ++c) {
            parts.push_back(random_field(t, seed + 31 * static_cast<unsigned>(j) + static_cast<unsigned>(c), 5));
        }
        out.push_back(components == 1 ? parts.front() : Field::from_components(parts));
    }
    return out;
}

}  // namespace

TEST_CASE("box + 1 on Misner has psi = t, L1 = 1 - 2 d_x, L2 = 1") {
    const auto op = operator_preset(misner(), "box_plus_one");
    const auto& t = op.model.torus;
    const Field u = random_field(t, 1, 6);
    const Field ut = random_field(t, 2, 6);
    const Field utt = random_field(t, 3, 6);
    for (double time : {0.01, 0.5, 3.0}) {
        // t u_tt - 2 u_tx + u_t + u
        const Field expected = time * utt - 2.0 * derivative(ut, 0) + ut + u;
        CHECK(max_diff(apply_operator(op, time, u, ut, utt), expected) <= 1e-12);
    }
    CHECK(op.l1_taylor[0].at(0, 0).c0 == 1.0);
    CHECK(op.l1_taylor[0].at(0, 0).drift == std::vector<double>{-2.0});
    CHECK(op.l2_taylor[0].at(0, 0).c0 == 1.0);
}

TEST_CASE("box on Misner is d_t(t d_t - 2 d_x)") {
    const auto op = operator_preset(misner(), "box");
    const auto& t = op.model.torus;
    const Field u = random_field(t, 4, 6);
    const Field ut = random_field(t, 5, 6);
    const Field utt = random_field(t, 6, 6);
    const double time = 0.4;
    const Field expected = time * utt + ut - 2.0 * derivative(ut, 0);
    CHECK(max_diff(apply_operator(op, time, u, ut, utt), expected) <= 1e-12);
}

TEST_CASE("box - d_t: L1(0) = -2 d_x and beta = -1") {
    const auto op = operator_preset(misner(), "box_minus_dt");
    CHECK(op.l1_taylor[0].at(0, 0).c0 == 0.0);
    CHECK(op.l1_taylor[0].at(0, 0).drift == std::vector<double>{-2.0});
    REQUIRE(op.beta.has_value());
    CHECK(op.beta->constant == -1.0);
}

TEST_CASE("admissibility verdicts") {
    CHECK(admissibility_check(operator_preset(misner(), "box_plus_one")).verdict == Verdict::Admissible);
    CHECK(admissibility_check(operator_preset(misner(), "box")).verdict == Verdict::Admissible);
    const auto bad = admissibility_check(operator_preset(misner(), "box_minus_dt"));
    CHECK(bad.verdict == Verdict::NonAdmissible);
    CHECK(bad.witness_value == -1.0);
    CHECK(bad.witness_point.size() == 1);
    const auto degenerate = make_generalized_misner(4, 0, {2 * kPi}, {32});
    for (const auto& name : {"box", "box_plus_one", "box_minus_dt"}) {
        CHECK(admissibility_check(operator_preset(degenerate, name)).verdict ==
              Verdict::DegenerateSurfaceGravity);
    }
}

TEST_CASE("variable beta: verdict follows the sign of beta on the grid") {
    const auto model = misner();
    const auto& t = model.torus;
    WaveVectorField w;
    w.w_t = {Coefficient{0.5, 0.3 * cos_x(t)}};
    CHECK(admissibility_check(scalar_operator(model, w, {})).admissible());
    w.w_t = {Coefficient{0.2, 0.3 * cos_x(t)}};
    const auto verdict = admissibility_check(scalar_operator(model, w, {}));
    CHECK(verdict.verdict == Verdict::NonAdmissible);
    CHECK(verdict.witness_value == doctest::Approx(-0.1).epsilon(1e-12));
    CHECK(std::abs(verdict.witness_point[0] - kPi) <= 1e-12);
}

TEST_CASE("adding W tangent to H leaves beta and the verdict unchanged") {
    const auto model = misner();
    WaveVectorField w;
    w.w_t = {0.25};
    const auto base = scalar_operator(model, w, {1.0});
    w.w_spatial = {3.0};
    const auto tangent = scalar_operator(model, w, {1.0});
    CHECK(base.beta->constant == tangent.beta->constant);
    CHECK(admissibility_check(base).verdict == admissibility_check(tangent).verdict);
}

TEST_CASE("Misner transport family for box + 1, k = 0..8") {
    const auto op = operator_preset(misner(), "box_plus_one");
    const auto& t = op.model.torus;
    for (int k = 0; k <= 8; ++k) {
        const auto fam = horizon_transport_family(op, k);
        const auto& a = fam.a_k.at(0, 0);
        CHECK(a.c0 == static_cast<double>(k + 1));
        CHECK(a.drift == std::vector<double>{-2.0});
        CHECK_FALSE(a.has_second());
        CHECK_FALSE(a.multiplier.has_value());
        const auto jets = random_jets(t, k + 1, 100 + static_cast<unsigned>(k));
        const Field f_k = random_field(t, 999, 5);
        CHECK(max_diff(fam.rhs(jets, f_k), f_k - jets.back()) <= 1e-15);
    }
}

TEST_CASE("box - d_t + 1 at k = 0: A_0 = -2 d_x, rhs = f_0 - u_0") {
    const auto op = operator_preset(misner(), "box_minus_dt_plus_one");
    const auto fam = horizon_transport_family(op, 0);
    CHECK(fam.a_k.at(0, 0).c0 == 0.0);
    CHECK(fam.a_k.at(0, 0).drift == std::vector<double>{-2.0});
    const auto& t = op.model.torus;
    const Field u0 = random_field(t, 8);
    const Field f0 = random_field(t, 9);
    CHECK(max_diff(fam.rhs(std::vector<Field>{u0}, f0), f0 - u0) <= 1e-15);
}

TEST_CASE("t^4 model: A_k = -2 d_x for every k") {
    const auto op = operator_preset(make_generalized_misner(4, 0, {2 * kPi}, {32}), "box");
    for (int k = 0; k <= 8; ++k) {
        const auto fam = horizon_transport_family(op, k);
        CHECK(fam.a_k.at(0, 0).c0 == 0.0);
        CHECK(fam.a_k.at(0, 0).drift == std::vector<double>{-2.0});
    }
}

TEST_CASE("natural gauge reproduces d_V + (k + 1) + beta") {
    const auto model = make_torus_quotient({1.0, kGolden}, {2 * kPi, 2 * kPi}, {16, 16});
    WaveVectorField w;
    w.w_t = {0.75};
    const auto op = scalar_operator(model, w, {});
    for (int k = 0; k <= 4; ++k) {
        const auto fam = horizon_transport_family(op, k);
        const auto& a = fam.a_k.at(0, 0);
        CHECK(a.c0 == doctest::Approx(k + 1 + 0.75));
        for (std::size_t i = 0; i < 2; ++i) CHECK(a.drift[i] == doctest::Approx(model.generator[i]));
    }
}

TEST_CASE("interior_apply examples") {
    const auto box = operator_preset(misner(), "box");
    const auto& t = box.model.torus;
    const Field zero = Field::zeros(t);
    CHECK(interior_apply(box, 0.5, Field::constant(t, 3.0), zero).max_abs() <= 1e-15);
    CHECK(interior_apply(box, 0.5, random_field(t, 21, 6), zero).max_abs() <= 1e-13);

    const auto op = operator_preset(misner(), "box_plus_one");
    const double time = 0.25;
    const double z = 2.0 * std::sqrt(time);
    const double j0 = std::cyl_bessel_j(0.0, z);
    const double j1 = std::cyl_bessel_j(1.0, z);
    const double dj1 = j0 - j1 / z;
    const double ut = -j1 / std::sqrt(time);
    const double utt = -dj1 / time + j1 / (2.0 * std::pow(time, 1.5));
    const Field acc = interior_apply(op, time, Field::constant(t, j0), Field::constant(t, ut));
    CHECK(std::abs(acc.coeffs()[0].real() - utt) <= 1e-10);
    CHECK_THROWS_AS(interior_apply(op, 0.0, zero, zero), DegenerateDivision);
}

TEST_CASE("d = 1 system_operator reproduces scalar_operator") {
    const auto model = misner();
    const auto scalar = operator_preset(model, "box_plus_one");
    const auto system = system_operator(model, scalar.l1_taylor, scalar.l2_taylor, 1);
    const auto& t = model.torus;
    const Field u = random_field(t, 40, 6);
    const Field ut = random_field(t, 41, 6);
    const Field utt = random_field(t, 42, 6);
    CHECK(max_diff(apply_operator(scalar, 0.3, u, ut, utt), apply_operator(system, 0.3, u, ut, utt)) == 0.0);
    CHECK(system.beta->constant == scalar.beta->constant);
    CHECK(admissibility_check(system).verdict == admissibility_check(scalar).verdict);
    CHECK_THROWS_AS(system_operator(model, {OperatorMatrix(2)}, {OperatorMatrix(1)}, 1), DimensionMismatch);
}

TEST_CASE("TM connection Laplacian: t d_t is in the kernel, A_0 singular, not admissible") {
    const auto op = tm_connection_laplacian(misner());
    const auto& t = op.model.torus;
    for (double time : {0.01, 0.3, 2.0}) {
        const Field u = Field::constant_vector(t, {time, 0.0});
        const Field ut = Field::constant_vector(t, {1.0, 0.0});
        const Field utt = Field::zeros(t, 2);
        CHECK(apply_operator(op, time, u, ut, utt).max_abs() <= 1e-12);
    }
    const auto fam = horizon_transport_family(op, 0);
    const auto sym = fam.a_k.symbol(std::vector<double>{0.0});
    const Complex det = sym[0] * sym[3] - sym[1] * sym[2];
    CHECK(std::abs(det) == 0.0);
    CHECK(admissibility_check(op).verdict == Verdict::NonAdmissible);
    CHECK(admissibility_check(op, {2.0, 0.0, 0.0, 1.0}).verdict == Verdict::NonAdmissible);
    CHECK_THROWS_AS(admissibility_check(op, {1.0, 0.0, 0.0, -1.0}), ValidationError);
}

TEST_CASE("Taylor data reproduces closed forms for box - (2t + 1) on the t^4 model") {
    const auto op = operator_preset(make_generalized_misner(4, 0, {2 * kPi}, {16}), "ce26_box_minus_2t_plus_1");
    for (double time : {0.05, 0.2, 0.5}) {
        CHECK(op.l2(time).at(0, 0).c0 == doctest::Approx(-(1.0 + 2.0 * time)));
        CHECK(op.l1(time).at(0, 0).c0 == doctest::Approx(4.0 * std::pow(time, 3)));
        CHECK(op.psi(time) == doctest::Approx(std::pow(time, 4)));
    }
}

TEST_CASE("operator jets vanish for exact polynomial solutions") {
    // u = t on Misner solves box - d_t: P t = 0 + 1 - 1 = 0.
    const auto op = operator_preset(misner(), "box_minus_dt");
    const auto& t = op.model.torus;
    const std::vector<Field> jets{Field::zeros(t), Field::constant(t, 1.0)};
    for (int k = 0; k <= 3; ++k) CHECK(operator_jet(op, jets, k).max_abs() == 0.0);
}

TEST_CASE("presets and errors") {
    CHECK(operator_preset_names().size() == 6);
    CHECK_THROWS_AS(operator_preset(misner(), "nope"), ValidationError);
    CHECK_THROWS_AS(tm_connection_laplacian(make_misner(Sign::Minus, 2 * kPi, 16)), ValidationError);
    CHECK(spectral_rate(operator_preset(misner(), "box_plus_one"), 0.1) > 0.0);
}
