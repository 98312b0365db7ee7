// One line per acceptance criterion; exit status 0 only when all pass.
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include "oracles.hpp"
#include "rotodeg/linear.hpp"
#include "rotodeg/locate.hpp"

using namespace rotodeg;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream note;

    void expect(bool ok, const std::string &what) {
        if (!ok) {
            pass = false;
            note << " [failed: " << what << "]";
        }
    }
};

TimeVaryingField scenario(ScenarioId id, std::map<std::string, double> params = {}) {
    return build_scenario({id, std::move(params)});
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

const Mat2 kJ = (Mat2() << 0.0, -1.0, 1.0, 0.0).finished();

void figure1(Outcome &o) {
    FlowSampler s(scenario(ScenarioId::rigid_rotation), {});
    const Ball u0{Vec2::Zero(), 2.0};
    const Ball u1{{5.0, 3.0}, 1.0};
    o.expect(brouwer_deg_fT(s, u0).value == 1, "deg(f_T, U0) = 1");
    o.expect(brouwer_deg_fT(s, u1).value == 0, "deg(f_T, U1) = 0");
    for (const auto &u : {u0, u1}) {
        o.expect(dee_degree(s, u, 0).value == 0, "D(F_T, U, nu_0) = 0");
        o.expect(sigma_set(s, u).sigma.empty(), "sigma empty");
    }
    const auto d0 = verify_decomposition(s, u0);
    const auto d1 = verify_decomposition(s, u1);
    o.expect(d0.holds && d0.lhs == 1 && d0.rhs == 1, "decomposition on U0");
    o.expect(d1.holds && d1.lhs == 0 && d1.rhs == 0, "decomposition on U1");
    o.note << "deg " << d0.lhs << "/" << d1.lhs;
}

void figure2(Outcome &o) {
    FlowSampler s(scenario(ScenarioId::example51), {});
    const Ball in{Vec2::Zero(), 1.0};
    const Ball out{Vec2::Zero(), 4.0};
    o.expect(brouwer_deg_fT(s, in).value == -1, "deg(f_T, B_in) = -1");
    o.expect(brouwer_deg_fT(s, out).value == -1, "deg(f_T, B_out) = -1");
    o.expect(sigma_set(s, in).sigma == std::vector<int>{1}, "sigma(in) = {1}");
    o.expect(sigma_set(s, out).sigma == std::vector<int>{0}, "sigma(out) = {0}");
    o.expect(dee_degree(s, in, 1).value == -2, "D(B_in, nu_1) = -2");
    o.expect(dee_degree(s, in, 0).value == 0, "D(B_in, nu_0) = 0");
    o.expect(dee_degree(s, out, 0).value == -2, "D(B_out, nu_0) = -2");
    for (const auto &b : {in, out}) {
        const auto d = verify_decomposition(s, b);
        o.expect(d.holds && d.lhs == -1 && d.rhs == -1 && d.origin_term == 1, "decomposition -1 = 1 + (-2)");
    }
    const auto annulus = annulus_of_circles(1.0, 4.0);
    const auto t = check_twist(s, annulus);
    o.expect(t.twist && !t.indeterminate, "twist");
    for (int i : {0, 1}) o.expect(annulus_consistency(s, annulus, i).holds, "annulus formula i = " + std::to_string(i));
    o.note << "sigma {1}/{0}, twist " << t.twist;
}

void orbits51(Outcome &o) {
    const auto f = scenario(ScenarioId::example51);
    FlowSampler s(f, {});
    const auto r = find_all(s, annulus_of_circles(1.0, 4.0), {});
    std::set<int> rotations;
    int verified = 0;
    for (const auto &orbit : r.orbits) {
        if (orbit.best_effort) continue;
        const auto check = reverify_orbit(f, orbit);
        o.expect(orbit.residual < 1e-8, "residual < 1e-8");
        o.expect(check.ok, "independent re-integration");
        if (check.ok) {
            rotations.insert(orbit.rotation);
            ++verified;
        }
    }
    o.expect(verified >= 2, "at least two orbits");
    o.expect(rotations.count(0) == 1 && rotations.count(1) == 1, "rotations 0 and 1");
    o.expect(r.inner_guarantee_met && r.outer_guarantee_met, "both guarantees");
    o.note << verified << " verified orbits";
}

void spiral(Outcome &o) {
    FlowSampler s(scenario(ScenarioId::expansive_spiral), {});
    const auto annulus = annulus_of_circles(1.0, 3.0);
    const auto t = check_twist(s, annulus);
    o.expect(t.twist && !t.indeterminate, "twist");
    for (double r : {1.0, 3.0}) o.expect(brouwer_deg_fT(s, Ball{Vec2::Zero(), r}).value == 1, "deg = 1");
    const auto found = find_all(s, annulus, {});
    o.expect(found.orbits.empty(), "no orbit in the annulus");
    o.note << "sigma {" << (t.sigma_in.sigma.empty() ? "" : std::to_string(t.sigma_in.sigma[0])) << "}/{"
           << (t.sigma_out.sigma.empty() ? "" : std::to_string(t.sigma_out.sigma[0])) << "}, " << found.orbits.size()
           << " orbits";
}

void fuzz(Outcome &o) {
    std::mt19937_64 rng(20240601);
    std::uniform_real_distribution<double> entry(-2.0, 2.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    int certified = 0;
    int mismatches = 0;
    constexpr int kCases = 50;
    for (int c = 0; c < kCases; ++c) {
        Mat2 A;
        Mat2 M;
        do {
            // Clockwise spin of up to about two turns plus a strain of
            // comparable size, so rotation ranges often straddle integers.
            const double spin = 4.0 * entry(rng);
            const double strain = 0.5 + std::abs(spin) * unit(rng);
            A << strain * entry(rng) / 2, strain * entry(rng) / 2 + spin, strain * entry(rng) / 2 - spin,
                strain * entry(rng) / 2;
            M = monodromy(constant_system(A, 1.0));
        } while (std::abs((M - Mat2::Identity()).determinant()) < 1e-2);
        const bool perturbed = c % 2 == 1;
        const double eps = perturbed ? 0.1 + 0.9 * unit(rng) : 0.0;
        const double phase = kTwoPi * unit(rng);
        TimeVaryingField f;
        f.rhs = [A, eps, phase](double t, const Vec2 &z) -> Vec2 {
            const double bump = 1.0 / (1.0 + z.squaredNorm());
            return A * z + eps * bump * Vec2(std::sin(kTwoPi * t + phase), std::cos(z.x() - kTwoPi * t));
        };
        f.period_T = 1.0;
        f.name = "fuzz";
        // Origin inside for even case pairs, outside for odd pairs.
        Ball ball;
        if ((c / 2) % 2 == 0) {
            ball = Ball{Vec2(0.3 * unit(rng), 0.3 * unit(rng)), 1.0 + unit(rng)};
        } else {
            const double a = kTwoPi * unit(rng);
            ball = Ball{(2.5 + unit(rng)) * Vec2(std::cos(a), std::sin(a)), 0.5 + unit(rng)};
        }
        try {
            const auto d = verify_decomposition(f, ball);
            bool all = d.fT.certified && d.sigma.complete && !d.sigma.grazing;
            for (const auto &[i, deg] : d.per_i) all = all && deg.certified;
            if (all) {
                ++certified;
                if (d.lhs != d.rhs) ++mismatches;
            }
        } catch (const Error &) {
            // Counted as uncertified.
        }
    }
    o.expect(mismatches == 0, "decomposition holds on every certified case");
    o.expect(certified >= 45, "certification rate >= 90%");
    o.note << certified << "/" << kCases << " certified, " << mismatches << " mismatches";
}

void lemma53(Outcome &o) {
    for (double w : {0.5, 1.5, 2.5, 3.5}) {
        const double omega_T = w * kPi;
        const double rot = -omega_T / kTwoPi;
        const int expected = 2 * static_cast<int>(std::floor(omega_T / kTwoPi)) + 1;
        const auto sys = constant_system(omega_T * kJ, 1.0);
        const auto ri = rotation_interval(sys);
        const int degree = linear_degree(monodromy(sys));
        const int k = (expected - 1) / 2;
        o.expect(std::abs(ri.min - rot) < 1e-6 && std::abs(ri.max - rot) < 1e-6, "rot = -wT/2pi");
        o.expect(degree == 1, "degree +1");
        o.expect(ri.min > -k - 1 && ri.max < -k, "rot in (-k-1, -k)");
        o.expect(maslov_index(sys) == expected, "index " + std::to_string(expected));
        o.note << " " << expected;
    }
    for (double T : {0.1, 0.43, 1.0, 3.0}) {
        const auto sys = constant_system(Vec2(-1.0, 1.0).asDiagonal(), T);
        const auto ri = rotation_interval(sys);
        o.expect(linear_degree(monodromy(sys)) == -1, "diag degree -1");
        o.expect(ri.min > -0.25 && ri.max < 0.25, "diag rot in (-1/4, 1/4)");
        o.expect(maslov_index(sys) == 0, "diag index 0");
    }
    o.note << "; diag family 0";
}

void superlinear(Outcome &o) {
    const auto f = scenario(ScenarioId::duffing_superlinear);
    double previous = -INFINITY;
    double worst = 0.0;
    std::map<double, double> rot;
    for (double a : {1.0, 5.0, 10.0, 20.0}) {
        rot[a] = rotation_number(f, {a, 0.0}, {});
        worst = std::max(worst, std::abs(rot[a] - oracle::duffing_rotation(a, 1.0)));
        o.expect(rot[a] > previous, "strictly increasing");
        previous = rot[a];
    }
    o.expect(rot[20.0] - rot[1.0] >= 2.0, "rot(20) - rot(1) >= 2");
    o.expect(worst < 1e-3, "oracle agreement 1e-3");
    o.note << "rot(20) - rot(1) = " << rot[20.0] - rot[1.0] << ", oracle gap " << worst;
}

void properties(Outcome &o) {
    const auto ex = scenario(ScenarioId::example51);
    FlowSampler s(ex, {});

    // Additivity: 𝔇 on the annulus cells equals the sum over a split.
    {
        LocateConfig cfg;
        cfg.max_depth = 3;
        for (int i : {0, 1}) {
            const auto tree = localize(s, annulus_of_circles(1.0, 4.0), i, cfg).tree;
            for (const auto &node : tree.nodes) {
                if (node.children.empty()) continue;
                int sum = 0;
                for (int c : node.children) sum += tree.nodes[static_cast<std::size_t>(c)].degree.value;
                o.expect(sum == node.degree.value, "additivity");
            }
        }
    }
    // Homotopy probe: the example's chart displacement against the one of
    // its linearization at zero, which agree on B1 up to a small error.
    {
        FlowSampler lin(to_field(linearization(ex, Asymptote::zero)), {});
        const auto curve = circle(Vec2::Zero(), 1.0);
        const Vec2 nu = IntegerTarget::of(1).value;
        std::set<int> values;
        for (int k = 0; k <= 10; ++k) {
            const double lambda = 0.1 * k;
            const auto d = winding_number(
                [&](const Vec2 &x) -> Vec2 { return (1.0 - lambda) * s.F(x) + lambda * lin.F(x); }, curve, nu);
            o.expect(d.certified, "homotopy step certified");
            values.insert(d.value);
        }
        o.expect(values.size() == 1, "homotopy invariance");
    }
    // Vanishing outside Σ.
    for (const auto &[r, sigma] : {std::pair{1.0, 1}, std::pair{4.0, 0}}) {
        for (int i = sigma - 3; i <= sigma + 3; ++i) {
            if (i == sigma) continue;
            o.expect(dee_degree(s, Ball{Vec2::Zero(), r}, i).value == 0, "vanishing outside sigma");
        }
    }
    // Scale invariance of linear rotation.
    {
        const auto sys = constant_system((Mat2() << 0.2, 3.0, -1.0, -0.4).finished(), 1.3);
        const auto r1 = rotation_interval_at(sys, 1.0);
        for (double r : {0.1, 10.0}) {
            const auto other = rotation_interval_at(sys, r);
            o.expect(std::abs(other.min - r1.min) < 1e-6 && std::abs(other.max - r1.max) < 1e-6, "scale invariance");
        }
        const Mat2 M = monodromy(sys);
        const int degree = linear_degree(M);
        for (double r : {0.1, 1.0, 10.0}) {
            o.expect(brouwer_deg_fT(to_field(sys), Ball{Vec2::Zero(), r}).value == degree, "degree across radii");
        }
    }
    // Integer rotation at located fixed points.
    {
        const auto found = find_all(s, annulus_of_circles(1.0, 4.0), {});
        for (const auto &orbit : found.orbits) {
            o.expect(std::abs(s.rotation(orbit.point) - std::round(s.rotation(orbit.point))) < 1e-6, "integer rotation");
        }
    }
    // Certified degrees are stable under sample doubling.
    {
        const auto rigid = scenario(ScenarioId::rigid_rotation);
        FlowSampler rs(rigid, {});
        DegreeConfig coarse;
        DegreeConfig fine;
        fine.n0 = 128;
        for (const Ball &b : {Ball{Vec2::Zero(), 1.0}, Ball{Vec2::Zero(), 4.0}}) {
            const auto a = brouwer_deg_fT(s, b, coarse);
            o.expect(a.certified && a.value == brouwer_deg_fT(s, b, fine).value, "doubling deg");
            for (int i : {0, 1}) o.expect(dee_degree(s, b, i, coarse).value == dee_degree(s, b, i, fine).value, "doubling D");
        }
        for (const Ball &b : {Ball{Vec2::Zero(), 2.0}, Ball{{5.0, 3.0}, 1.0}}) {
            o.expect(brouwer_deg_fT(rs, b, coarse).value == brouwer_deg_fT(rs, b, fine).value, "doubling rigid");
        }
    }
    o.note << "six property families";
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char *name;
        std::function<void(Outcome &)> run;
        double budget_s;  // 0: no runtime bound
    };
    const std::vector<Criterion> criteria{
        {1, "rigid rotation degrees and decomposition", figure1, 1.0},
        {2, "example51 degrees, sigma sets, twist, annulus formula", figure2, 30.0},
        {3, "example51 periodic orbits with rotations 0 and 1", orbits51, 60.0},
        {4, "expansive spiral negative control", spiral, 0.0},
        {5, "decomposition fuzz over 50 random systems", fuzz, 0.0},
        {6, "linear characterization and Maslov index", lemma53, 0.0},
        {7, "superlinear rotation growth against the period law", superlinear, 0.0},
        {8, "property suites", properties, 0.0},
    };
    int failures = 0;
    for (const auto &c : criteria) {
        Outcome o;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            c.run(o);
        } catch (const std::exception &e) {
            o.pass = false;
            o.note << " [exception: " << e.what() << "]";
        }
        const double elapsed = seconds_since(t0);
        if (c.budget_s > 0.0 && elapsed > c.budget_s) {
            o.pass = false;
            o.note << " [over the " << c.budget_s << " s budget]";
        }
        if (!o.pass) ++failures;
        std::cout << "criterion " << c.id << ": " << (o.pass ? "PASS" : "FAIL") << " " << c.name << ": "
                  << o.note.str() << " (" << std::fixed << std::setprecision(2) << elapsed << " s)" << std::endl;
        std::cout.unsetf(std::ios::fixed);
    }
    return failures == 0 ? 0 : 1;
}
