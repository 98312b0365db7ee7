#include <doctest.h>

#include <cmath>
#include <numeric>
#include <set>

#include "rotodeg/locate.hpp"

using namespace rotodeg;

namespace {

TimeVaryingField scenario(ScenarioId id, std::map<std::string, double> params = {}) {
    return build_scenario({id, std::move(params)});
}

}  // namespace

TEST_CASE("cells") {
    const Cell box = BoxCell{0.0, 2.0, -1.0, 1.0};
    CHECK(cell_midpoint(box) == Vec2(1.0, 0.0));
    CHECK(cell_contains(box, {0.5, 0.5}));
    CHECK_FALSE(cell_contains(box, {2.5, 0.5}));
    const auto kids = split_cell(box);
    double area = 0.0;
    for (const auto &k : kids) {
        const auto &b = std::get<BoxCell>(k);
        area += (b.x1 - b.x0) * (b.y1 - b.y0);
    }
    CHECK(area == doctest::Approx(4.0));
    const Cell sector = SectorCell{Vec2::Zero(), 1.0, 4.0, 0.0, kTwoPi};
    CHECK(cell_contains(sector, {0.0, -2.0}));
    CHECK_FALSE(cell_contains(sector, {0.5, 0.0}));
    CHECK(cell_boundary(box, 32).orientation_consistent());
}

TEST_CASE("example51 localization keeps degree bookkeeping") {
    const auto f = scenario(ScenarioId::example51);
    FlowSampler s(f, {});
    LocateConfig cfg;
    cfg.max_depth = 5;
    for (int i : {0, 1}) {
        const auto r = localize(s, annulus_of_circles(1.0, 4.0), i, cfg);
        CHECK_FALSE(r.leaves.empty());
        const int root = r.tree.nodes[0].degree.value;
        CHECK(root == (i == 0 ? -2 : 2));
        // Every split preserves the parent's degree.
        for (const auto &node : r.tree.nodes) {
            if (node.children.empty()) continue;
            int sum = 0;
            for (int c : node.children) sum += r.tree.nodes[static_cast<std::size_t>(c)].degree.value;
            CHECK(sum == node.degree.value);
        }
        int leaf_sum = 0;
        for (int l : r.leaves) leaf_sum += r.tree.nodes[static_cast<std::size_t>(l)].degree.value;
        CHECK(leaf_sum == root);
    }
}

TEST_CASE("rigid rotation annulus has no cells") {
    const auto f = scenario(ScenarioId::rigid_rotation);
    FlowSampler s(f, {});
    const auto r = localize(s, annulus_of_circles(1.0, 3.0), 0, {});
    CHECK(r.leaves.empty());
    const auto all = find_all(s, annulus_of_circles(1.0, 3.0), {});
    CHECK(all.orbits.empty());
}

TEST_CASE("localize rejects balls around the origin") {
    const auto f = scenario(ScenarioId::example51);
    CHECK_THROWS_AS(localize(f, Ball{Vec2::Zero(), 1.0}, 0, {}), InvalidRegion);
}

TEST_CASE("example51 orbits") {
    const auto f = scenario(ScenarioId::example51);
    FlowSampler s(f, {});
    const auto report = find_all(s, annulus_of_circles(1.0, 4.0), {});
    CHECK(report.twist.twist);
    CHECK(report.inner_guarantee_met);
    CHECK(report.outer_guarantee_met);
    std::set<int> rotations;
    for (const auto &o : report.orbits) {
        CHECK(o.residual < 1e-8);
        CHECK(std::abs(s.rotation(o.point) - o.rotation) < 1e-6);
        const auto check = reverify_orbit(f, o);
        CHECK(check.ok);
        rotations.insert(o.rotation);
    }
    CHECK(rotations == std::set<int>{0, 1});
    for (std::size_t a = 0; a < report.orbits.size(); ++a) {
        for (std::size_t b = a + 1; b < report.orbits.size(); ++b) {
            CHECK((report.orbits[a].point - report.orbits[b].point).norm() > 1e-4 * 4.0);
        }
    }
}

TEST_CASE("refine_orbit on an exact fixed point") {
    const auto f = scenario(ScenarioId::example51);
    FlowSampler s(f, {});
    const auto report = find_all(s, annulus_of_circles(1.0, 4.0), {});
    REQUIRE_FALSE(report.orbits.empty());
    const auto &o = report.orbits.front();
    const auto again = refine_orbit(s, o.point, o.rotation, std::nullopt, {});
    CHECK(again.point == o.point);
    CHECK(again.residual == o.residual);
}

TEST_CASE("refine_orbit reports failure") {
    // A uniform drift has no fixed point at all.
    TimeVaryingField drift;
    drift.rhs = [](double, const Vec2 &) { return Vec2(1.0, 0.0); };
    LocateConfig cfg;
    cfg.newton_iterations = 5;
    CHECK_THROWS_AS(refine_orbit(drift, {2.0, 1.0}, 0, cfg), NoConvergence);
}

TEST_CASE("floquet multipliers") {
    auto as_set = [](std::pair<std::complex<double>, std::complex<double>> p) {
        if (p.first.real() > p.second.real() || (p.first.real() == p.second.real() && p.first.imag() > p.second.imag())) {
            std::swap(p.first, p.second);
        }
        return p;
    };
    PeriodicOrbit origin;
    {
        const auto f = scenario(ScenarioId::rigid_rotation);
        const auto m = as_set(floquet_multipliers(f, origin, {}));
        CHECK(std::abs(m.first - std::polar(1.0, -kPi / 4)) < 1e-6);
        CHECK(std::abs(m.second - std::polar(1.0, kPi / 4)) < 1e-6);
    }
    {
        const auto f = scenario(ScenarioId::linear_system);
        const auto m = as_set(floquet_multipliers(f, origin, {}));
        CHECK(std::abs(m.first - std::exp(-0.43)) < 1e-6);
        CHECK(std::abs(m.second - std::exp(0.43)) < 1e-6);
    }
    {
        // A full turn during [0, τ) then the hyperbolic phase for T − τ = 0.33.
        // Integration error divided by the difference step limits accuracy.
        const auto f = scenario(ScenarioId::example51);
        const auto m = as_set(floquet_multipliers(f, origin, {}));
        CHECK(std::abs(m.first - std::exp(-0.33)) < 1e-4);
        CHECK(std::abs(m.second - std::exp(0.33)) < 1e-4);
    }
}

TEST_CASE("expansive spiral has no orbit in the annulus") {
    const auto f = scenario(ScenarioId::expansive_spiral);
    FlowSampler s(f, {});
    const auto report = find_all(s, annulus_of_circles(1.0, 3.0), {});
    CHECK(report.twist.twist);
    CHECK(report.deg_inner.value == 1);
    CHECK(report.deg_outer.value == 1);
    CHECK(report.orbits.empty());
}
