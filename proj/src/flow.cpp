#include "rotodeg/flow.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include <boost/numeric/odeint.hpp>

namespace rotodeg {

namespace odeint = boost::numeric::odeint;

namespace {

using State = std::array<double, 2>;

Vec2 to_vec(const State &s) { return {s[0], s[1]}; }

// Splits [t0, t1] at the declared discontinuities of the field (taken modulo
// the period).
std::vector<double> segment_breaks(const TimeVaryingField &field, double t0, double t1) {
    std::vector<double> breaks{t0};
    const double period = field.period_T;
    if (!field.discontinuities.empty()) {
        const auto first_cycle = static_cast<long>(std::floor(t0 / period));
        const auto last_cycle = static_cast<long>(std::floor(t1 / period));
        for (long k = first_cycle; k <= last_cycle; ++k) {
            for (double d : field.discontinuities) {
                const double t = static_cast<double>(k) * period + d;
                if (t > t0 && t < t1) breaks.push_back(t);
            }
        }
        std::sort(breaks.begin(), breaks.end());
    }
    breaks.push_back(t1);
    return breaks;
}

class Integrator {
  public:
    Integrator(const TimeVaryingField &field, const IntegratorConfig &cfg) : field_(field), cfg_(cfg) {}

    // Integrates one segment on which the field is continuous in t. The
    // right-hand side never sees t = b itself, so a left-continuous branch
    // is used up to the jump.
    void segment(double a, double b, State &x, Trajectory &out) {
        const double t_inside = std::nextafter(b, a);
        auto system = [this, t_inside](const State &s, State &dsdt, double t) {
            const Vec2 v = evaluate_field(field_, std::min(t, t_inside), to_vec(s));
            dsdt = {v.x(), v.y()};
        };
        if (cfg_.method == IntegratorMethod::rk4_fixed) {
            fixed(system, a, b, x, out);
        } else {
            adaptive(system, a, b, x, out);
        }
    }

  private:
    void count_step(double t) {
        if (++steps_ > cfg_.max_steps) {
            std::ostringstream os;
            os << "integration exceeded " << cfg_.max_steps << " steps at t = " << t;
            throw StepLimit(os.str());
        }
    }

    static void check_finite(const State &x, double t) {
        if (!std::isfinite(x[0]) || !std::isfinite(x[1])) {
            std::ostringstream os;
            os << "non-finite state at t = " << t;
            throw BlowUp(os.str());
        }
    }

    template <class System>
    void fixed(System &system, double a, double b, State &x, Trajectory &out) {
        odeint::runge_kutta4<State> stepper;
        const double h = cfg_.step_h;
        const auto n = std::max<long>(1, static_cast<long>(std::ceil((b - a) / h - 1e-9)));
        for (long k = 0; k < n; ++k) {
            const double t = a + (b - a) * static_cast<double>(k) / static_cast<double>(n);
            const double dt = (b - a) / static_cast<double>(n);
            stepper.do_step(system, x, t, dt);
            count_step(t);
            check_finite(x, t + dt);
            out.times.push_back(k + 1 == n ? b : t + dt);
            out.points.push_back(to_vec(x));
        }
    }

    template <class System>
    void adaptive(System &system, double a, double b, State &x, Trajectory &out) {
        auto stepper = odeint::make_controlled(cfg_.abs_tol, cfg_.rel_tol, odeint::runge_kutta_dopri5<State>());
        double t = a;
        double dt = (b - a) / 64.0;
        const double eps_t = 1e-14 * std::max(1.0, std::abs(b));
        while (b - t > eps_t) {
            dt = std::min(dt, b - t);
            const double t_before = t;
            const auto result = stepper.try_step(system, x, t, dt);
            count_step(t);
            if (result != odeint::success) continue;
            check_finite(x, t);
            if (b - t <= eps_t) t = b;
            out.times.push_back(t);
            out.points.push_back(to_vec(x));
            if (t <= t_before) throw StepLimit("step size underflow");
        }
    }

    const TimeVaryingField &field_;
    const IntegratorConfig &cfg_;
    long steps_ = 0;
};

void append_lifted(LiftedPath &path, double t, const Vec2 &p, double theta) {
    path.times.push_back(t);
    path.points.push_back(p);
    path.theta.push_back(theta);
    path.r.push_back(p.norm());
}

class Lifter {
  public:
    Lifter(const TimeVaryingField &field, const IntegratorConfig &cfg, const Vec2 &start)
        : field_(field), cfg_(cfg), start_(start) {}

    void check_clearance(double t, const Vec2 &p) const {
        if (p.norm() < cfg_.origin_clearance_eps) {
            std::ostringstream os;
            os << "trajectory from (" << start_.x() << ", " << start_.y() << ") reaches |z| = " << p.norm()
               << " at t = " << t;
            throw OriginCrossing(NullSetHit{start_, t}, os.str());
        }
    }

    // Appends the samples after (ta, pa) up to and including (tb, pb).
    void gap(double ta, const Vec2 &pa, double tb, const Vec2 &pb, int depth, LiftedPath &path) {
        const double step = -signed_angle(pa, pb);
        if (std::abs(step) < kPi / 2.0) {
            append_lifted(path, tb, pb, path.theta.back() + step);
            return;
        }
        if (depth >= cfg_.max_lift_refinements) {
            std::ostringstream os;
            os << "angle lift could not be certified on [" << ta << ", " << tb << "]";
            throw RefinementLimit(os.str());
        }
        const double tm = 0.5 * (ta + tb);
        const Trajectory sub = evolve(field_, pa, ta, tm, cfg_);
        const Vec2 pm = sub.points.back();
        check_clearance(tm, pm);
        gap(ta, pa, tm, pm, depth + 1, path);
        gap(tm, pm, tb, pb, depth + 1, path);
    }

  private:
    const TimeVaryingField &field_;
    const IntegratorConfig &cfg_;
    Vec2 start_;
};

}  // namespace

void IntegratorConfig::validate() const {
    if (method == IntegratorMethod::rk4_fixed && !(step_h > 0.0)) throw InvalidConfig("step_h must be positive");
    if (!(abs_tol > 0.0 && abs_tol <= 1e-2)) throw InvalidConfig("abs_tol must lie in (0, 1e-2]");
    if (!(rel_tol > 0.0 && rel_tol <= 1e-2)) throw InvalidConfig("rel_tol must lie in (0, 1e-2]");
    if (!(origin_clearance_eps > 0.0)) throw InvalidConfig("origin_clearance_eps must be positive");
    if (max_steps <= 0) throw InvalidConfig("max_steps must be positive");
}

Trajectory evolve(const TimeVaryingField &field, const Vec2 &x0, double t0, double t1,
                  const IntegratorConfig &cfg) {
    if (!x0.allFinite()) throw InvalidParams("initial point is not finite");
    if (!(t1 >= t0)) throw InvalidParams("evolve requires t1 >= t0");
    Trajectory out;
    out.times.push_back(t0);
    out.points.push_back(x0);
    State x{x0.x(), x0.y()};
    Integrator integrator(field, cfg);
    const auto breaks = segment_breaks(field, t0, t1);
    try {
        for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
            if (breaks[k + 1] > breaks[k]) integrator.segment(breaks[k], breaks[k + 1], x, out);
        }
    } catch (const NormCapExceeded &e) {
        throw BlowUp(std::string("solution is not continuable: ") + e.what());
    }
    return out;
}

Trajectory evolve(const TimeVaryingField &field, const Vec2 &x0, double t1, const IntegratorConfig &cfg) {
    return evolve(field, x0, 0.0, t1, cfg);
}

Vec2 evolve_point(const TimeVaryingField &field, const Vec2 &x0, double t1, const IntegratorConfig &cfg) {
    return evolve(field, x0, t1, cfg).points.back();
}

LiftedPath lift_trajectory(const TimeVaryingField &field, const Trajectory &traj, const IntegratorConfig &cfg,
                           double theta_seed_offset) {
    if (traj.points.empty()) throw InvalidParams("empty trajectory");
    Lifter lifter(field, cfg, traj.points.front());
    LiftedPath path;
    for (std::size_t k = 0; k < traj.points.size(); ++k) lifter.check_clearance(traj.times[k], traj.points[k]);
    append_lifted(path, traj.times[0], traj.points[0], plane_to_chart(traj.points[0]).x() + theta_seed_offset);
    for (std::size_t k = 0; k + 1 < traj.points.size(); ++k) {
        lifter.gap(traj.times[k], traj.points[k], traj.times[k + 1], traj.points[k + 1], 0, path);
    }
    return path;
}

LiftedPath lifted_orbit(const TimeVaryingField &field, const Vec2 &x0, const IntegratorConfig &cfg) {
    return lift_trajectory(field, evolve(field, x0, field.period_T, cfg), cfg);
}

double rotation_number(const TimeVaryingField &field, const Vec2 &x0, const IntegratorConfig &cfg) {
    const auto path = lifted_orbit(field, x0, cfg);
    return (path.theta.back() - path.theta.front()) / kTwoPi;
}

Vec2 displacement_fT(const TimeVaryingField &field, const Vec2 &x0, const IntegratorConfig &cfg) {
    return evolve_point(field, x0, field.period_T, cfg) - x0;
}

Displacements displacements(const TimeVaryingField &field, const Vec2 &x0, const IntegratorConfig &cfg) {
    const auto path = lifted_orbit(field, x0, cfg);
    return {path.points.back() - x0,
            Vec2(path.theta.back() - path.theta.front(), path.r.back() - path.r.front())};
}

Vec2 displacement_FT(const TimeVaryingField &field, const Vec2 &x0, const IntegratorConfig &cfg) {
    return displacements(field, x0, cfg).F;
}

}  // namespace rotodeg
