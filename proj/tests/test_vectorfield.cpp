#include <doctest.h>

#include <cmath>
#include <random>

#include "rotodeg/errors.hpp"
#include "rotodeg/vectorfield.hpp"

using namespace rotodeg;

namespace {

TimeVaryingField scenario(ScenarioId id, std::map<std::string, double> params = {}) {
    return build_scenario({id, std::move(params)});
}

void check_close(const Vec2 &a, const Vec2 &b, double tol) {
    CHECK((a - b).norm() <= tol);
}

}  // namespace

TEST_CASE("rigid rotation turns clockwise") {
    const auto f = scenario(ScenarioId::rigid_rotation);
    for (double t : {0.0, 0.3, 0.99}) {
        check_close(evaluate_field(f, t, {1.0, 0.0}), {0.0, -kPi / 4}, 1e-15);
        check_close(evaluate_field(f, t, {0.0, 2.0}), {kPi / 2, 0.0}, 1e-15);
    }
}

TEST_CASE("example51 values") {
    const auto f = scenario(ScenarioId::example51);
    check_close(evaluate_field(f, 0.2, Vec2::Zero()), Vec2::Zero(), 0.0);
    // (2π/τ)(y, −x) in the rotation phase.
    check_close(evaluate_field(f, 0.05, {0.0, 1.0}), {kTwoPi / 0.1, 0.0}, 1e-12);
    for (double t : {0.0, 0.05, 0.2, 0.42}) check_close(evaluate_field(f, t, {3.0, 0.0}), {-3.0, 0.0}, 1e-15);
    // Hyperbolic phase near the origin.
    check_close(evaluate_field(f, 0.2, {0.5, 0.5}), {-0.5, 0.5}, 1e-15);
    REQUIRE(f.discontinuities.size() == 1);
    CHECK(f.discontinuities[0] == 0.1);
}

TEST_CASE("duffing acceleration is -u^3") {
    const auto f = scenario(ScenarioId::duffing_superlinear);
    check_close(evaluate_field(f, 0.4, {2.0, 0.0}), {0.0, -8.0}, 1e-15);
}

TEST_CASE("scenario errors") {
    CHECK_THROWS_AS(parse_scenario_id("nope"), UnknownScenario);
    CHECK_THROWS_AS(scenario(ScenarioId::example51, {{"tau", 0.5}}), InvalidParams);
    CHECK_THROWS_AS(scenario(ScenarioId::example51, {{"tau", 0.0}}), InvalidParams);
    CHECK_THROWS_AS(scenario(ScenarioId::rigid_rotation, {{"T", -1.0}}), InvalidParams);
    CHECK_THROWS_AS(scenario(ScenarioId::rigid_rotation, {{"bogus", 1.0}}), InvalidParams);
    CHECK_THROWS_AS(scenario(ScenarioId::rigid_rotation, {{"omega", NAN}}), InvalidParams);
}

TEST_CASE("norm cap") {
    auto f = scenario(ScenarioId::duffing_superlinear);
    CHECK_THROWS_AS(evaluate_field(f, 0.0, {2e6, 0.0}), NormCapExceeded);
}

TEST_CASE("every scenario is T-periodic in time") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> coord(-5.0, 5.0);
    for (const auto &name : scenario_names()) {
        const auto f = scenario(parse_scenario_id(name));
        std::uniform_real_distribution<double> time(0.0, f.period_T);
        for (int k = 0; k < 100; ++k) {
            const double t = time(rng);
            const Vec2 z(coord(rng), coord(rng));
            const Vec2 a = evaluate_field(f, t, z);
            const Vec2 b = evaluate_field(f, t + f.period_T, z);
            INFO(name);
            CHECK((a - b).norm() <= 1e-9 * (1.0 + a.norm()));
        }
    }
}

TEST_CASE("example51 blend is continuous at both seams") {
    const auto f = scenario(ScenarioId::example51);
    for (double t : {0.05, 0.3}) {
        for (double a : {0.3, 2.0, 4.4}) {
            const Vec2 u(std::cos(a), std::sin(a));
            for (double r : {1.5, 2.0}) {
                const Vec2 mid = evaluate_field(f, t, r * u);
                for (double s : {-1.0, 1.0}) {
                    const Vec2 off = evaluate_field(f, t, (r + s * 1e-8) * u);
                    CHECK((off - mid).norm() <= 1e-6 * (1.0 + mid.norm()));
                }
            }
        }
    }
}

TEST_CASE("linearization at zero is tangent") {
    for (const auto &name : scenario_names()) {
        const auto f = scenario(parse_scenario_id(name));
        if (!f.lin_zero) continue;
        for (double t : {0.0, 0.37 * f.period_T, 0.81 * f.period_T}) {
            const Vec2 u = Vec2(0.6, -0.8);
            check_close(evaluate_field(f, t, Vec2::Zero()), Vec2::Zero(), 0.0);
            double previous = INFINITY;
            for (double r : {1e-3, 1e-5}) {
                const Vec2 z = r * u;
                const double ratio = (evaluate_field(f, t, z) - (*f.lin_zero)(t) * z).norm() / r;
                INFO(name);
                CHECK(ratio <= previous);
                CHECK(ratio < 1e-2);
                previous = ratio;
            }
        }
    }
}

TEST_CASE("smoothstep") {
    CHECK(smoothstep(-1.0) == 0.0);
    CHECK(smoothstep(0.5) == doctest::Approx(0.5));
    CHECK(smoothstep(2.0) == 1.0);
}
