#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "rotodeg/boundary.hpp"
#include "rotodeg/flow.hpp"
#include "rotodeg/sampler.hpp"

namespace rotodeg {

using PlaneMap = std::function<Vec2(const Vec2 &)>;

struct DegreeConfig {
    IntegratorConfig integrator;
    int n0 = 64;
    double clearance_tol = 1e-8;       // relative to the curve scale
    RefineLimits refine{40, 1u << 14};
    double sigma_step = 0.05;          // max rotation difference of adjacent samples
    double integer_margin = 1e-4;      // rotations
};

/// ν_i = (2πi, 0).
struct IntegerTarget {
    int i = 0;
    Vec2 value = Vec2::Zero();
    static IntegerTarget of(int i) { return {i, Vec2(kTwoPi * i, 0.0)}; }
};

struct DegreeReport {
    int value = 0;
    double boundary_clearance = 0.0;
    double max_angular_step = 0.0;
    int samples_used = 0;
    bool certified = false;
};

/// Σ bookkeeping for a set of boundary samples. `sigma` holds the integers in
/// [min_rot, max_rot]; `sigma_wide` and `sigma_narrow` widen or shrink the
/// interval by the integer margin and bracket the true set when the extremes
/// are only known to that accuracy.
struct RotationSummary {
    double min_rot = 0.0;
    double max_rot = 0.0;
    std::vector<int> sigma;
    std::vector<int> sigma_wide;
    std::vector<int> sigma_narrow;
    double clearance_to_integers = 0.0;
    bool grazing = false;  // an integer lies within integer_margin of an extreme
    bool complete = true;  // refinement reached sigma_step everywhere
    int samples = 0;
};

/// Certified winding number of g − target along the curve, signed so that it
/// is the Brouwer degree on the enclosed region. Throws BoundaryZero when
/// |g − target| drops below clearance_tol·curve.scale() at a sample.
DegreeReport winding_number(const PlaneMap &g, const OrientedCurve &curve, const Vec2 &target,
                            const DegreeConfig &cfg = {});

/// deg(f_T, U, 0) summed over the boundary components of the region.
DegreeReport brouwer_deg_fT(FlowSampler &sampler, const Region &region, const DegreeConfig &cfg = {});
DegreeReport brouwer_deg_fT(const TimeVaryingField &field, const Region &region, const DegreeConfig &cfg = {});

/// Generalized degree 𝔇(F_T, U, ν_i), from boundary values of F_T∘Ψ⁻¹ − ν_i.
DegreeReport dee_degree(FlowSampler &sampler, const Region &region, int i, const DegreeConfig &cfg = {});
DegreeReport dee_degree(const TimeVaryingField &field, const Region &region, int i, const DegreeConfig &cfg = {});

/// Rotation range and Σ on one curve, refined until adjacent rotations
/// differ by less than cfg.sigma_step.
RotationSummary sigma_set(FlowSampler &sampler, const OrientedCurve &curve, const DegreeConfig &cfg = {});
RotationSummary sigma_set(const TimeVaryingField &field, const OrientedCurve &curve, const DegreeConfig &cfg = {});

/// Σ over every boundary component of a region (convex hull of all rotations).
RotationSummary sigma_set(FlowSampler &sampler, const Region &region, const DegreeConfig &cfg = {});

/// Builds the summary for a known rotation range.
RotationSummary summarize_rotations(double min_rot, double max_rot, double integer_margin, int samples);

struct DecompositionReport {
    int lhs = 0;
    int rhs = 0;
    int origin_term = 0;  // 1 when the origin lies in U, 0 when outside its closure
    bool holds = false;
    DegreeReport fT;
    RotationSummary sigma;
    std::map<int, DegreeReport> per_i;
    std::vector<std::string> diagnostics;
};

/// deg(f_T, U, 0) against origin_term + Σ_{i∈Σ} 𝔇(F_T, U, ν_i).
DecompositionReport verify_decomposition(FlowSampler &sampler, const Region &region, const DegreeConfig &cfg = {});
DecompositionReport verify_decomposition(const TimeVaryingField &field, const Region &region,
                                         const DegreeConfig &cfg = {});

struct AnnulusConsistencyReport {
    int i = 0;
    DegreeReport direct;  // keyhole contour around the annulus
    DegreeReport outer;   // 𝔇 on U_out
    DegreeReport inner;   // 𝔇 on U_in
    bool holds = false;
};

/// deg(F_T∘Ψ⁻¹, A, ν_i) computed on a single keyhole contour, compared with
/// 𝔇(F_T, U_out, ν_i) − 𝔇(F_T, U_in, ν_i).
AnnulusConsistencyReport annulus_consistency(FlowSampler &sampler, const GeneralizedAnnulus &annulus, int i,
                                             const DegreeConfig &cfg = {});
AnnulusConsistencyReport annulus_consistency(const TimeVaryingField &field, const GeneralizedAnnulus &annulus, int i,
                                             const DegreeConfig &cfg = {});

/// Closed contour running along the outer boundary, in along a cut, around the
/// inner boundary clockwise and back out. `shift` rotates the start parameter
/// (and so the cut) along both boundaries.
OrientedCurve keyhole_contour(const GeneralizedAnnulus &annulus, double shift, int n0);

struct TwistReport {
    bool twist = false;
    bool indeterminate = false;
    RotationSummary sigma_in;
    RotationSummary sigma_out;
};

/// Σ(∂U_out) ∩ Σ(∂U_in) = ∅. When an integer grazes an extreme, the answer
/// is still determinate if it does not depend on that integer's membership.
TwistReport check_twist(FlowSampler &sampler, const GeneralizedAnnulus &annulus, const DegreeConfig &cfg = {});
TwistReport check_twist(const TimeVaryingField &field, const GeneralizedAnnulus &annulus,
                        const DegreeConfig &cfg = {});

}  // namespace rotodeg
