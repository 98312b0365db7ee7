#pragma once

#include <array>
#include <complex>
#include <map>
#include <string>
#include <variant>
#include <optional>
#include <utility>
#include <vector>

#include "rotodeg/degree.hpp"

namespace rotodeg {

/// Polar-rectangle cell {center + ρ(cos α, sin α) : ρ ∈ [r0, r1], α ∈ [a0, a1]}
/// in plane coordinates. Annuli are tiled by these, so cell degrees add up
/// to the annulus degree exactly.
struct SectorCell {
    Vec2 center = Vec2::Zero();
    double r0 = 0.0, r1 = 1.0;
    double a0 = 0.0, a1 = kTwoPi;
};

/// Axis-aligned box [x0, x1] × [y0, y1].
struct BoxCell {
    double x0 = -1.0, x1 = 1.0;
    double y0 = -1.0, y1 = 1.0;
};

using Cell = std::variant<SectorCell, BoxCell>;

Vec2 cell_midpoint(const Cell &cell);
/// Upper bound on the distance between two points of the cell.
double cell_diameter(const Cell &cell);
bool cell_contains(const Cell &cell, const Vec2 &p);
/// Positively oriented boundary of the cell.
OrientedCurve cell_boundary(const Cell &cell, int n0);
/// The four children of a cell, split at the midpoints shifted by `jitter`
/// (a fraction of the cell size), in fixed quadrant order.
std::array<Cell, 4> split_cell(const Cell &cell, double jitter = 0.0);

struct CellNode {
    Cell cell;
    DegreeReport degree;
    int depth = 0;
    int parent = -1;
    std::vector<int> children;
};

/// Subdivision tree; node 0 is the root and children keep split_cell order.
struct CellTree {
    std::vector<CellNode> nodes;
    std::optional<int> i;  // rotation target, or empty for f_T
};

struct LocateConfig {
    DegreeConfig degree{IntegratorConfig{}, 32};
    int max_depth = 16;
    double min_diameter = 1e-3;
    double orbit_tol = 1e-8;
    int newton_iterations = 100;
    double separation = 1e-4;  // relative to region scale
    int sweep_grid = 64;
    int sweep_candidates = 16;
    int sweep_newton_iterations = 40;
    bool best_effort_sweep = true;
};

struct LocalizeResult {
    CellTree tree;
    std::vector<int> leaves;  // nodes without children and nonzero certified degree
};

/// Subdivides the region (an annulus of circles or a ball not containing the
/// origin) and keeps cells where G_i = F_T∘Ψ⁻¹ − ν_i has nonzero certified
/// degree. Zero-degree cells are pruned.
LocalizeResult localize(FlowSampler &sampler, const Region &region, int i, const LocateConfig &cfg = {});
LocalizeResult localize(const TimeVaryingField &field, const Region &region, int i, const LocateConfig &cfg = {});

/// Same search on f_T itself over the bounding box of a ball (the origin may
/// be inside). Cells outside the ball can be returned.
LocalizeResult localize_displacement(FlowSampler &sampler, const Ball &ball, const LocateConfig &cfg = {});

struct PeriodicOrbit {
    Vec2 point = Vec2::Zero();
    int rotation = 0;
    double rotation_value = 0.0;
    double residual = 0.0;
    std::optional<Cell> enclosure;
    std::optional<std::pair<std::complex<double>, std::complex<double>>> multipliers;
    bool best_effort = false;  // found by the residual sweep, no degree certificate
};

/// Newton on f_T with a central-difference Jacobian and backtracking; if that
/// fails and an enclosure is known, descends into sub-cells of nonzero degree
/// and retries. Throws NoConvergence.
PeriodicOrbit refine_orbit(FlowSampler &sampler, const Vec2 &seed, std::optional<int> i,
                           const std::optional<Cell> &enclosure, const LocateConfig &cfg = {});
PeriodicOrbit refine_orbit(const TimeVaryingField &field, const Vec2 &seed, int i, const LocateConfig &cfg = {});

/// Eigenvalues of the central-difference monodromy D φ_T at the orbit.
/// Throws IllConditioned when halving the difference step changes the
/// Jacobian by more than 1e-4 relative.
std::pair<std::complex<double>, std::complex<double>> floquet_multipliers(FlowSampler &sampler,
                                                                          const PeriodicOrbit &orbit);
std::pair<std::complex<double>, std::complex<double>> floquet_multipliers(const TimeVaryingField &field,
                                                                          const PeriodicOrbit &orbit,
                                                                          const IntegratorConfig &cfg = {});

/// Independent check of an orbit: fixed-step RK4 with T/20000 steps, residual
/// below `tol` and lifted turn count within 1e-5 of the integer label.
struct OrbitCheck {
    double residual = 0.0;
    double rotation_value = 0.0;
    bool ok = false;
};
OrbitCheck reverify_orbit(const TimeVaryingField &field, const PeriodicOrbit &orbit, double tol = 1e-8);

struct FindAllReport {
    TwistReport twist;
    DegreeReport deg_inner;
    DegreeReport deg_outer;
    std::map<int, AnnulusConsistencyReport> annulus_degrees;
    std::vector<PeriodicOrbit> orbits;           // inside the annulus
    std::vector<PeriodicOrbit> disk_orbits;      // inner-ball search, when it ran
    bool inner_guarantee_met = true;  // deg(f_T, U_in) ≠ 1 ⇒ orbit with rotation in Σ(∂U_in)
    bool outer_guarantee_met = true;
    std::vector<std::string> diagnostics;
};

/// Degree-guided search for T-periodic orbits starting in the annulus, plus a
/// best-effort residual sweep for orbits of index zero.
FindAllReport find_all(FlowSampler &sampler, const GeneralizedAnnulus &annulus, const LocateConfig &cfg = {});
FindAllReport find_all(const TimeVaryingField &field, const GeneralizedAnnulus &annulus,
                       const LocateConfig &cfg = {});

}  // namespace rotodeg
