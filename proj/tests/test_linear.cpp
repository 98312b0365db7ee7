#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "rotodeg/linear.hpp"

using namespace rotodeg;

namespace {

const Mat2 kJ = (Mat2() << 0.0, -1.0, 1.0, 0.0).finished();
const Mat2 kHyp = Vec2(-1.0, 1.0).asDiagonal();

Mat2 rotation(double a) { return (Mat2() << std::cos(a), -std::sin(a), std::sin(a), std::cos(a)).finished(); }

}  // namespace

TEST_CASE("hamiltonian flag") {
    CHECK(constant_system(kJ, 1.0).hamiltonian_flag);
    CHECK(constant_system(kHyp, 1.0).hamiltonian_flag);
    CHECK_FALSE(constant_system(Vec2(1.0, 2.0).asDiagonal(), 1.0).hamiltonian_flag);
}

TEST_CASE("monodromy") {
    const Mat2 quarter = monodromy(constant_system(kPi / 2 * kJ, 1.0));
    CHECK((quarter - rotation(kPi / 2)).norm() < 1e-9);
    const Mat2 hyp = monodromy(constant_system(kHyp, 0.43));
    CHECK((hyp - Mat2(Vec2(std::exp(-0.43), std::exp(0.43)).asDiagonal())).norm() < 1e-9);
    CHECK(hyp.determinant() == doctest::Approx(1.0).epsilon(1e-8));
    const Mat2 tiny = monodromy(constant_system(kHyp, 1e-9));
    CHECK((tiny - Mat2::Identity()).norm() < 1e-8);
}

TEST_CASE("nonresonance and degree") {
    CHECK(nonresonant(rotation(kPi / 2)));
    CHECK_FALSE(nonresonant(Mat2::Identity()));
    const Mat2 hyp = Vec2(std::exp(-0.43), std::exp(0.43)).asDiagonal();
    CHECK(nonresonant(hyp));
    CHECK(linear_degree(hyp) == -1);
    CHECK(linear_degree(rotation(kPi / 2)) == 1);
    const Mat2 shear = (Mat2() << 1.0, 1.0, 0.0, 1.0).finished();
    CHECK_THROWS_AS(linear_degree(shear), Resonant);
    CHECK_THROWS_AS(nonresonant(Mat2(Vec2(1.0 + 1e-9, 2.0).asDiagonal())), Marginal);
}

TEST_CASE("rotation intervals") {
    const auto ri = rotation_interval(constant_system(2.5 * kPi * kJ, 1.0));
    CHECK(ri.min == doctest::Approx(-1.25).epsilon(1e-7));
    CHECK(ri.max == doctest::Approx(-1.25).epsilon(1e-7));
    const auto hyp = rotation_interval(constant_system(kHyp, 0.43));
    CHECK(hyp.min > -0.25);
    CHECK(hyp.max < 0.25);
    CHECK(hyp.min == doctest::Approx(-hyp.max).epsilon(1e-8));
    const auto still = rotation_interval(constant_system(Mat2::Zero(), 1.0));
    CHECK(still.min == 0.0);
    CHECK(still.max == 0.0);
}

TEST_CASE("rotation is scale invariant") {
    const Mat2 A = (Mat2() << 0.2, 3.0, -1.0, -0.4).finished();
    const auto sys = constant_system(A, 1.3);
    const auto r1 = rotation_interval_at(sys, 1.0);
    for (double r : {0.1, 10.0}) {
        const auto other = rotation_interval_at(sys, r);
        CHECK(std::abs(other.min - r1.min) < 1e-6);
        CHECK(std::abs(other.max - r1.max) < 1e-6);
    }
}

TEST_CASE("maslov index by inversion") {
    // rot = −ωT/2π, degree +1, index 2⌊ωT/2π⌋ + 1.
    for (double w : {0.5, 1.5, 2.5, 3.5}) {
        const double omega_T = w * kPi;
        const int expected = 2 * static_cast<int>(std::floor(omega_T / kTwoPi)) + 1;
        const auto sys = constant_system(omega_T * kJ, 1.0);
        CHECK(maslov_index(sys) == expected);
        const int degree = linear_degree(monodromy(sys));
        CHECK(degree == 1);
        CHECK(expected % 2 != 0);
    }
    CHECK(maslov_index(constant_system(kHyp, 0.43)) == 0);
    CHECK(maslov_from(-1, {0.9, 1.1}, 1e-4) == -2);
    CHECK_THROWS_AS(maslov_from(-1, {0.4, 0.6}, 1e-4), Inconsistent);
    CHECK_THROWS_AS(maslov_from(1, {-1.00001, -0.5}, 1e-4), Inconsistent);
    CHECK_THROWS_AS(maslov_index(constant_system(Vec2(1.0, 2.0).asDiagonal(), 1.0)), NotHamiltonian);
}

TEST_CASE("asymptotic radius") {
    const auto ex = build_scenario({ScenarioId::example51, {}});
    const auto zero = asymptotic_radius(ex, Asymptote::zero);
    CHECK(zero.radius <= 1.0);
    CHECK(zero.linear_sigma == std::vector<int>{1});
    CHECK(zero.linear_degree == -1);
    const auto inf = asymptotic_radius(ex, Asymptote::infinity);
    CHECK(inf.radius >= 4.0);
    CHECK(inf.linear_sigma == std::vector<int>{0});
    CHECK(inf.linear_degree == -1);
    const auto lin = build_scenario({ScenarioId::linear_system, {{"a12", 2.0}}});
    CHECK(asymptotic_radius(lin, Asymptote::zero).radius == 1.0);
    CHECK(asymptotic_radius(lin, Asymptote::infinity).trace.size() == 1);
}
