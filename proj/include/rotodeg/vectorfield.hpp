#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rotodeg/types.hpp"

namespace rotodeg {

/// Time-dependent 2×2 matrix, e.g. a linearization L(t).
using MatrixFunction = std::function<Mat2(double)>;

/// Right-hand side h(t, z) of a planar T-periodic system ż = h(t, z).
///
/// `rhs` must be T-periodic in t. `discontinuities` lists the times in
/// (0, T) where h jumps in t; integrators split there. When `lin_zero` is
/// set, h(t, 0) = 0 and D_z h(t, 0) = lin_zero(t).
struct TimeVaryingField {
    std::function<Vec2(double, const Vec2 &)> rhs;
    double period_T = 1.0;
    std::optional<MatrixFunction> lin_zero;
    std::optional<MatrixFunction> lin_inf;
    std::vector<double> discontinuities;
    double norm_cap = 1e6;
    std::string name;
};

/// h(t, z). Throws NormCapExceeded when |z| > field.norm_cap.
Vec2 evaluate_field(const TimeVaryingField &field, double t, const Vec2 &z);

enum class ScenarioId {
    rigid_rotation,
    example51,
    linear_system,
    duffing_superlinear,
    asymlin_hamiltonian,
    expansive_spiral,
};

struct ScenarioSpec {
    ScenarioId name = ScenarioId::rigid_rotation;
    std::map<std::string, double> params;
};

/// Parses a scenario id; throws UnknownScenario.
ScenarioId parse_scenario_id(const std::string &name);
std::string to_string(ScenarioId id);
std::vector<std::string> scenario_names();

/// Default parameters of a scenario (also the full list of accepted keys).
std::map<std::string, double> default_params(ScenarioId id);

/// Instantiates a built-in scenario. Unknown keys or out-of-range values
/// throw InvalidParams.
///
///  - rigid_rotation (omega, T): ż = ω(y, −x), a clockwise rotation.
///  - example51 (tau, T): rotation phase (2π/τ)(y, −x) on [0, τ), then
///    diag(−1, 1) on [τ, T) near the origin; diag(−1, 1) for |z| ≥ 2; C¹
///    smoothstep blend on 1.5 < |z| < 2.
///  - linear_system (a11, a12, a21, a22, T): ż = A z.
///  - duffing_superlinear (c, T): ü + c u + u³ = 0 as (u, w).
///  - asymlin_hamiltonian (omega0, omegainf, eps, T): radial clockwise
///    Hamiltonian twist between rates omega0 near 0 and omegainf at infinity,
///    with a time-periodic Hamiltonian perturbation supported in 1 < |z| < 2.
///  - expansive_spiral (T): lift (θ + r t, r(1 + t)) of the polar flow,
///    i.e. ż = (z + |z|(y, −x)) / (1 + t) on [0, T).
TimeVaryingField build_scenario(const ScenarioSpec &spec);

/// C¹ smoothstep 3u² − 2u³ clamped to [0, 1].
double smoothstep(double u);

}  // namespace rotodeg
