#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "config.hpp"
#include "expression.hpp"
#include "gallery.hpp"
#include "horizonwave/errors.hpp"
#include "scenario.hpp"
#include "support.hpp"

using namespace horizonwave;
using namespace horizonwave::cli;
using namespace hw_test;

TEST_CASE("config subset") {
    const auto j = parse_config(R"toml(
# comment
schema = 1
name = "demo"   # trailing comment
[model]
resolution = [16, 16,]
period = 6.5
flag = true
[params.inner]
taus = [1e-3, 5e-4]
"quoted key" = "a \"b\""
)toml");
    CHECK(j["schema"] == 1);
    CHECK(j["name"] == "demo");
    CHECK(j["model"]["resolution"] == nlohmann::json::array({16, 16}));
    CHECK(j["model"]["period"] == 6.5);
    CHECK(j["model"]["flag"] == true);
    CHECK(j["params"]["inner"]["taus"][1] == 5e-4);
    CHECK(j["params"]["inner"]["quoted key"] == "a \"b\"");

    CHECK_THROWS_WITH_AS(parse_config("a = 1\na = 2\n"), doctest::Contains("line 2"), ValidationError);
    CHECK_THROWS_AS(parse_config("a = \n"), ValidationError);
    CHECK_THROWS_AS(parse_config("a = \"open\n"), ValidationError);
    CHECK_THROWS_AS(parse_config("[t\n"), ValidationError);
    CHECK_THROWS_AS(parse_config("a = 1 2\n"), ValidationError);
}

TEST_CASE("expressions") {
    const double x[] = {0.3, 1.1};
    CHECK(Expression::parse("1 + 2*3").evaluate(x) == 7.0);
    CHECK(Expression::parse("2^3^2").evaluate(x) == 512.0);
    CHECK(Expression::parse("-2^2").evaluate(x) == -4.0);
    CHECK(Expression::parse("(1 + 1)/4").evaluate(x) == 0.5);
    CHECK(Expression::parse("cos(x) * sin(y)").evaluate(x) == doctest::Approx(std::cos(0.3) * std::sin(1.1)));
    CHECK(Expression::parse("x1 - y").evaluate(x) == 0.0);
    CHECK(Expression::parse("J0(2)").evaluate(x) == doctest::Approx(std::cyl_bessel_j(0.0, 2.0)));
    CHECK(constant_expression("2*pi") == doctest::Approx(2 * kPi));
    CHECK(Expression::parse("exp(y)").max_coordinate() == 1);
    CHECK_THROWS_AS(Expression::parse("cos(x"), ValidationError);
    CHECK_THROWS_AS(Expression::parse("foo(1)"), ValidationError);
    CHECK_THROWS_AS(Expression::parse("1 +"), ValidationError);
    CHECK_THROWS_AS(constant_expression("x"), ValidationError);

    const auto t = SpatialTorus::circle(2 * kPi, 16);
    CHECK(max_diff(field_from_expression(t, "cos(x)"), cos_x(t)) <= 1e-15);
    CHECK_THROWS_AS(field_from_expression(t, "cos(y)"), ValidationError);
    CHECK_THROWS_AS(field_from_expression(t, "1/(x - x)"), ValidationError);
}

TEST_CASE("scenario validation") {
    const auto out = std::filesystem::temp_directory_path() / "horizonwave_cli_test";
    const auto run = [&](const std::string& text) { return run_experiment(parse_config(text), ".", out); };
    CHECK_THROWS_AS(run("experiment = \"asymptotics\"\n"), ValidationError);
    CHECK_THROWS_AS(run("schema = 1\nexperiment = \"nope\"\n"), ValidationError);
    CHECK_THROWS_AS(run("schema = 1\nexperiment = \"asymptotics\"\n[data]\nu0 = \"1\"\n[params]\nNN = 3\n"), ValidationError);
    CHECK_THROWS_AS(run("schema = 1\nexperiment = \"asymptotics\"\n[model]\nresolution = 7\n[data]\nu0 = \"1\"\n"), ValidationError);
    CHECK_THROWS_AS(run("schema = 1\nexperiment = \"asymptotics\"\n"), ValidationError);
    CHECK_THROWS_AS(run("schema = 1\nexperiment = \"characteristic\"\n[operator]\npreset = \"box_minus_dt\"\n[data]\nu0 = \"1\"\n"),
                    NotAdmissible);

    auto ctx = run("schema = 1\nexperiment = \"asymptotics\"\n[operator]\npreset = \"box_plus_one\"\n[data]\nu0 = \"1\"\n"
                   "[params]\nN = 3\n[expect]\nobstruction = true\n");
    CHECK_THROWS_AS(finish_run(ctx), CheckFailure);
    try {
        finish_run(ctx);
    } catch (const CheckFailure& e) {
        CHECK(e.exit_code() == kMissedObstruction);
    }
}

TEST_CASE("gallery registry") {
    CHECK(gallery().size() == 9);
    for (const char* name : {"misner_ln_t_blowup", "ce26_2d_obstruction", "tm_vector_kernel"}) {
        CHECK(gallery_entry(name).name == name);
    }
    CHECK_THROWS_AS(gallery_entry("missing"), ValidationError);
}
