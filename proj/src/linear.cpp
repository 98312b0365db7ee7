#include "rotodeg/linear.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/LU>
#include <boost/math/tools/minima.hpp>

#include "rotodeg/parallel.hpp"

namespace rotodeg {

namespace {

const Mat2 kJ = (Mat2() << 0.0, -1.0, 1.0, 0.0).finished();

bool symmetric_product(const Mat2 &L) {
    const Mat2 P = kJ * L;
    return std::abs(P(0, 1) - P(1, 0)) <= 1e-10 * std::max(1.0, P.norm());
}

}  // namespace

LinearSystem constant_system(const Mat2 &A, double T) {
    LinearSystem sys{[A](double) { return A; }, T, false, {}};
    sys.hamiltonian_flag = symmetric_product(A);
    return sys;
}

LinearSystem linearization(const TimeVaryingField &field, Asymptote which) {
    const auto &L = which == Asymptote::zero ? field.lin_zero : field.lin_inf;
    if (!L) throw InvalidParams("field '" + field.name + "' has no linearization at " + to_string(which));
    LinearSystem sys{*L, field.period_T, false, field.discontinuities};
    sys.hamiltonian_flag = is_hamiltonian(sys);
    return sys;
}

bool is_hamiltonian(const LinearSystem &sys) {
    constexpr int kSamples = 32;
    for (int k = 0; k < kSamples; ++k) {
        if (!symmetric_product(sys.L(sys.T * k / kSamples))) return false;
    }
    for (double t : sys.jump_times) {
        if (!symmetric_product(sys.L(std::nextafter(t, 0.0))) || !symmetric_product(sys.L(t))) return false;
    }
    return true;
}

TimeVaryingField to_field(const LinearSystem &sys) {
    TimeVaryingField field;
    field.rhs = [L = sys.L](double t, const Vec2 &z) -> Vec2 { return L(t) * z; };
    field.period_T = sys.T;
    field.lin_zero = sys.L;
    field.lin_inf = sys.L;
    field.discontinuities = sys.jump_times;
    field.norm_cap = std::numeric_limits<double>::infinity();
    field.name = "linear";
    return field;
}

Mat2 monodromy(const LinearSystem &sys, const LinearConfig &cfg) {
    const auto field = to_field(sys);
    Mat2 M;
    M.col(0) = evolve_point(field, Vec2(1.0, 0.0), sys.T, cfg.integrator);
    M.col(1) = evolve_point(field, Vec2(0.0, 1.0), sys.T, cfg.integrator);
    return M;
}

bool nonresonant(const Mat2 &M) {
    const double d = std::abs((M - Mat2::Identity()).determinant());
    if (d > 1e-8) return true;
    if (d < 1e-12) return false;
    std::ostringstream os;
    os << "|det(M - I)| = " << d << " is between 1e-12 and 1e-8";
    throw Marginal(os.str());
}

int linear_degree(const Mat2 &M) {
    if (!nonresonant(M)) throw Resonant("det(M - I) = 0: the system has nonzero periodic solutions");
    const Mat2 A = M - Mat2::Identity();
    const int sign = A.determinant() > 0.0 ? 1 : -1;
    const auto w = winding_number([&A](const Vec2 &z) -> Vec2 { return A * z; }, circle(Vec2::Zero(), 1.0),
                                  Vec2::Zero());
    if (w.value != sign) {
        std::ostringstream os;
        os << "sign det(M - I) = " << sign << " but the winding number of (M - I)z is " << w.value;
        throw Inconsistent(os.str());
    }
    return sign;
}

RotationInterval rotation_interval_at(const LinearSystem &sys, double radius, const LinearConfig &cfg) {
    FlowSampler sampler(to_field(sys), cfg.integrator);
    auto rot = [&](double phi) { return sampler.rotation(radius * Vec2(std::cos(phi), std::sin(phi))); };
    const int n = std::max(cfg.samples, 16);
    const double h = kTwoPi / n;
    std::vector<double> values(static_cast<std::size_t>(n));
    parallel_for(values.size(), [&](std::size_t k) { values[k] = rot(h * static_cast<double>(k)); });
    const auto lo = std::min_element(values.begin(), values.end()) - values.begin();
    const auto hi = std::max_element(values.begin(), values.end()) - values.begin();

    // Brent search on the bracket around each sampled extreme.
    constexpr int kBits = 40;
    boost::uintmax_t iterations = 200;
    const double a_lo = h * static_cast<double>(lo);
    const auto min_pair = boost::math::tools::brent_find_minima(rot, a_lo - h, a_lo + h, kBits, iterations);
    iterations = 200;
    const double a_hi = h * static_cast<double>(hi);
    const auto max_pair =
        boost::math::tools::brent_find_minima([&](double phi) { return -rot(phi); }, a_hi - h, a_hi + h, kBits, iterations);
    return {std::min(min_pair.second, values[static_cast<std::size_t>(lo)]),
            std::max(-max_pair.second, values[static_cast<std::size_t>(hi)])};
}

RotationInterval rotation_interval(const LinearSystem &sys, const LinearConfig &cfg) {
    const auto unit = rotation_interval_at(sys, 1.0, cfg);
    for (double r : {0.1, 10.0}) {
        const auto other = rotation_interval_at(sys, r, cfg);
        if (std::abs(other.min - unit.min) > cfg.scale_tol || std::abs(other.max - unit.max) > cfg.scale_tol) {
            std::ostringstream os;
            os << "rotation interval at r = " << r << " is [" << other.min << ", " << other.max
               << "], at r = 1 it is [" << unit.min << ", " << unit.max << "]";
            throw Inconsistent(os.str());
        }
    }
    return unit;
}

int maslov_from(int degree, const RotationInterval &rot, double margin) {
    // Both ends of the interval must fall strictly inside the same open
    // window, with `margin` to spare.
    auto window = [&](double offset) {
        const double lo = std::floor(-rot.max + offset);
        const double hi = std::floor(-rot.min + offset);
        const bool inside = lo == hi && std::abs(-rot.max + offset - lo) > margin &&
                            std::abs(-rot.min + offset - (lo + 1.0)) > margin;
        return std::pair<bool, int>{inside, static_cast<int>(lo)};
    };
    std::ostringstream os;
    os << "rotation interval [" << rot.min << ", " << rot.max << "] with degree " << degree;
    if (degree == -1) {
        const auto [ok, k] = window(0.5);
        if (!ok) throw Inconsistent(os.str() + " is not inside any (-k - 1/2, -k + 1/2)");
        return 2 * k;
    }
    if (degree == 1) {
        const auto [ok, k] = window(0.0);
        if (!ok) throw Inconsistent(os.str() + " is not inside any (-k - 1, -k)");
        return 2 * k + 1;
    }
    throw Inconsistent(os.str() + ": degree must be -1 or 1");
}

int maslov_index(const LinearSystem &sys, const LinearConfig &cfg) {
    if (!sys.hamiltonian_flag || !is_hamiltonian(sys)) {
        throw NotHamiltonian("the Maslov index needs a Hamiltonian system, L = J S with S symmetric");
    }
    const int degree = linear_degree(monodromy(sys, cfg));
    return maslov_from(degree, rotation_interval(sys, cfg), cfg.margin);
}

AsymptoticRadiusReport asymptotic_radius(const TimeVaryingField &field, Asymptote which, const LinearConfig &cfg) {
    const auto sys = linearization(field, which);
    AsymptoticRadiusReport report;
    report.which = which;
    report.linear_rot = rotation_interval(sys, cfg);
    report.linear_sigma =
        summarize_rotations(report.linear_rot.min, report.linear_rot.max, cfg.degree.integer_margin, cfg.samples).sigma;
    report.linear_degree = linear_degree(monodromy(sys, cfg));

    FlowSampler sampler(field, cfg.integrator);
    double r = 1.0;
    for (int step = 0; step <= cfg.max_doublings; ++step) {
        RadiusProbe probe;
        probe.radius = r;
        try {
            probe.sigma = sigma_set(sampler, circle(Vec2::Zero(), r, cfg.degree.n0), cfg.degree);
            const auto deg = brouwer_deg_fT(sampler, Ball{Vec2::Zero(), r}, cfg.degree);
            probe.degree = deg.value;
            probe.certified = deg.certified && probe.sigma.complete;
            probe.matches = probe.certified && probe.sigma.sigma == report.linear_sigma &&
                            probe.degree == report.linear_degree &&
                            std::abs(probe.sigma.min_rot - report.linear_rot.min) <= cfg.hull_tol &&
                            std::abs(probe.sigma.max_rot - report.linear_rot.max) <= cfg.hull_tol;
        } catch (const Error &) {
            probe.certified = false;
        }
        report.trace.push_back(probe);
        if (probe.matches) {
            report.radius = r;
            return report;
        }
        r = which == Asymptote::zero ? 0.5 * r : 2.0 * r;
    }
    std::ostringstream os;
    os << "no radius towards " << to_string(which) << " matches the linearization; trace:";
    for (const auto &p : report.trace) {
        os << " r=" << p.radius << " rot=[" << p.sigma.min_rot << "," << p.sigma.max_rot << "] deg=" << p.degree
           << (p.certified ? "" : " (uncertified)") << ";";
    }
    throw NotFound(os.str());
}

std::string to_string(Asymptote which) { return which == Asymptote::zero ? "zero" : "infinity"; }

}  // namespace rotodeg
