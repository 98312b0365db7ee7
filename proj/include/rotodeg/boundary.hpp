#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "rotodeg/errors.hpp"
#include "rotodeg/types.hpp"

namespace rotodeg {

enum class Orientation { positive, negative };

struct CurveSample {
    double param;
    Vec2 point;
};

/// Closed planar curve given by a parameterization of [0, 1] together with a
/// sorted list of cached samples. The closing sample at parameter 1 is not
/// stored; the polygon wraps from the last sample back to the first.
class OrientedCurve {
  public:
    using Parameterization = std::function<Vec2(double)>;

    OrientedCurve(Parameterization param, Orientation orientation, int n0, double scale);
    OrientedCurve(Parameterization param, Orientation orientation, std::vector<CurveSample> samples, double scale);

    [[nodiscard]] Vec2 at(double s) const { return (*param_)(s); }
    [[nodiscard]] Orientation orientation() const noexcept { return orientation_; }
    [[nodiscard]] const std::vector<CurveSample> &samples() const noexcept { return samples_; }
    [[nodiscard]] std::size_t size() const noexcept { return samples_.size(); }
    /// Characteristic length (radius for circles) used to normalize clearances.
    [[nodiscard]] double scale() const noexcept { return scale_; }
    [[nodiscard]] const std::shared_ptr<const Parameterization> &parameterization() const noexcept { return param_; }

    /// Shoelace area of the sample polygon (positive when counterclockwise).
    [[nodiscard]] double signed_area() const;
    /// True when the sample polygon's signed area agrees with orientation().
    [[nodiscard]] bool orientation_consistent() const;
    /// Polygon winding number of the samples about p (crossing rule).
    [[nodiscard]] int winding_about(const Vec2 &p) const;

    /// Same curve resampled uniformly with n samples.
    [[nodiscard]] OrientedCurve resampled(int n) const;

  private:
    std::shared_ptr<const Parameterization> param_;
    Orientation orientation_;
    std::vector<CurveSample> samples_;
    double scale_;
};

/// Positively oriented circle with n0 ≥ 16 uniform samples.
OrientedCurve circle(const Vec2 &center, double radius, int n0 = 64);

/// Positively oriented boundary of the polar sector
/// {center + ρ(cos α, sin α) : ρ ∈ [r0, r1], α ∈ [a0, a1]} (counterclockwise
/// angles). With a1 − a0 = 2π this is the keyhole contour of an annulus; with
/// r0 = 0 it is the boundary of a wedge.
OrientedCurve sector_boundary(const Vec2 &center, double r0, double r1, double a0, double a1, int n0);

struct Ball {
    Vec2 center = Vec2::Zero();
    double radius = 1.0;
};

/// Region bounded by a user-supplied Jordan curve.
struct JordanRegion {
    OrientedCurve boundary;
};

/// closure(U_out) \ U_in with U_in ⊂⊂ U_out, both given by positively
/// oriented boundaries.
struct GeneralizedAnnulus {
    OrientedCurve outer;
    OrientedCurve inner;
    bool contains_origin_inner = true;
    /// Set for annuli of concentric circles; enables polar-sector cells.
    std::optional<std::pair<Ball, Ball>> circles;
};

/// Annulus between origin-centered circles of radius r_in < r_out.
GeneralizedAnnulus annulus_of_circles(double r_in, double r_out, int n0 = 64);

/// Validates the annulus invariants; throws InvalidRegion.
void validate_annulus(const GeneralizedAnnulus &annulus);

using Region = std::variant<Ball, JordanRegion, GeneralizedAnnulus>;

/// Boundary pieces with the orientation sign induced by the region: +1 for
/// outer boundaries, −1 for the inner boundary of an annulus.
std::vector<std::pair<OrientedCurve, int>> boundary_components(const Region &region, int n0 = 64);

enum class OriginPlacement { inside, outside_closure, on_boundary };

/// Where the origin lies with respect to the (open) region. Annuli are
/// treated as U_out \ closure(U_in).
OriginPlacement origin_placement(const Region &region);

/// Characteristic size used for separation thresholds.
double region_scale(const Region &region);

/// Adjacent-sample predicate deciding whether the gap must be split.
using SplitPredicate = std::function<bool(const CurveSample &, const CurveSample &)>;

struct RefineLimits {
    int max_depth = 40;
    std::size_t max_samples = 1u << 16;
};

/// Bisects sample gaps until no adjacent pair satisfies needs_split. Old
/// samples are retained. Returns the refined curve; `complete` is false when
/// max_depth or max_samples stopped the refinement (the partial refinement is
/// still returned).
struct RefineResult {
    OrientedCurve curve;
    bool complete;
    int depth_reached;
};
RefineResult refine_partial(const OrientedCurve &curve, const SplitPredicate &needs_split, RefineLimits limits = {});

/// Strict form: throws RefinementLimit if the predicate cannot be satisfied.
OrientedCurve refine(const OrientedCurve &curve, const SplitPredicate &needs_split, int max_depth = 40);

}  // namespace rotodeg
