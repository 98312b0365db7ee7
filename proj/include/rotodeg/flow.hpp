#pragma once

#include <vector>

#include "rotodeg/errors.hpp"
#include "rotodeg/types.hpp"
#include "rotodeg/vectorfield.hpp"

namespace rotodeg {

enum class IntegratorMethod { rk4_fixed, rk45_adaptive };

struct IntegratorConfig {
    IntegratorMethod method = IntegratorMethod::rk45_adaptive;
    double step_h = 1e-3;  // rk4_fixed only
    double abs_tol = 1e-11;
    double rel_tol = 1e-11;
    long max_steps = 2'000'000;
    double origin_clearance_eps = 1e-10;
    int max_lift_refinements = 40;  // bisection depth per gap when lifting

    /// Throws InvalidConfig when the type invariants do not hold.
    void validate() const;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<Vec2> points;
};

/// Trajectory in the half-plane cover: theta is the continuous clockwise
/// angle, Ψ(theta_k, r_k) = points_k.
struct LiftedPath {
    std::vector<double> times;
    std::vector<Vec2> points;
    std::vector<double> theta;
    std::vector<double> r;
};

/// φ(t, x0) sampled at every accepted step on [0, t1]. Declared
/// discontinuity times are mandatory step boundaries.
/// Throws BlowUp when the norm cap is exceeded and StepLimit after max_steps.
Trajectory evolve(const TimeVaryingField &field, const Vec2 &x0, double t1, const IntegratorConfig &cfg);

/// Same, starting at time t0 instead of 0.
Trajectory evolve(const TimeVaryingField &field, const Vec2 &x0, double t0, double t1, const IntegratorConfig &cfg);

/// End point φ(t1, x0) only.
Vec2 evolve_point(const TimeVaryingField &field, const Vec2 &x0, double t1, const IntegratorConfig &cfg);

/// Continuous clockwise-angle lift of a trajectory of `field`. Consecutive
/// samples subtending π/2 or more are bisected by re-integrating the gap.
/// `theta_seed_offset` shifts the initial representative by a multiple of 2π.
/// Throws OriginCrossing (sample inside the clearance) or RefinementLimit.
LiftedPath lift_trajectory(const TimeVaryingField &field, const Trajectory &traj, const IntegratorConfig &cfg,
                           double theta_seed_offset = 0.0);

/// Lift of φ(·, x0) on [0, T].
LiftedPath lifted_orbit(const TimeVaryingField &field, const Vec2 &x0, const IntegratorConfig &cfg);

/// Number of clockwise turns of the trajectory from x0 over one period.
double rotation_number(const TimeVaryingField &field, const Vec2 &x0, const IntegratorConfig &cfg);

/// f_T(x) = φ(T, x) − x.
Vec2 displacement_fT(const TimeVaryingField &field, const Vec2 &x0, const IntegratorConfig &cfg);

/// F_T(y) = Φ(T, y) − y = (Δθ, Δr) for y the canonical preimage of x0.
Vec2 displacement_FT(const TimeVaryingField &field, const Vec2 &x0, const IntegratorConfig &cfg);

/// f_T and F_T from a single integration.
struct Displacements {
    Vec2 f;  // plane displacement
    Vec2 F;  // chart displacement (Δθ, Δr)
};
Displacements displacements(const TimeVaryingField &field, const Vec2 &x0, const IntegratorConfig &cfg);

}  // namespace rotodeg
