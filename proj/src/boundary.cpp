#include "rotodeg/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace rotodeg {

namespace {

std::vector<CurveSample> uniform_samples(const OrientedCurve::Parameterization &param, int n) {
    std::vector<CurveSample> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        const double s = static_cast<double>(k) / static_cast<double>(n);
        out.push_back({s, param(s)});
    }
    return out;
}

class Refiner {
  public:
    Refiner(const OrientedCurve &curve, const SplitPredicate &needs_split, RefineLimits limits)
        : curve_(curve), needs_split_(needs_split), limits_(limits), count_(curve.size()) {}

    void gap(const CurveSample &a, const CurveSample &b, int depth, std::vector<CurveSample> &out) {
        if (stopped_ || !needs_split_(a, b)) return;
        if (depth >= limits_.max_depth || count_ >= limits_.max_samples) {
            stopped_ = true;
            depth_reached_ = std::max(depth_reached_, depth);
            return;
        }
        const double s = 0.5 * (a.param + b.param);
        const CurveSample mid{s, curve_.at(s)};
        ++count_;
        depth_reached_ = std::max(depth_reached_, depth + 1);
        gap(a, mid, depth + 1, out);
        out.push_back(mid);
        gap(mid, b, depth + 1, out);
    }

    [[nodiscard]] bool stopped() const { return stopped_; }
    [[nodiscard]] int depth_reached() const { return depth_reached_; }

  private:
    const OrientedCurve &curve_;
    const SplitPredicate &needs_split_;
    RefineLimits limits_;
    std::size_t count_;
    bool stopped_ = false;
    int depth_reached_ = 0;
};

}  // namespace

OrientedCurve::OrientedCurve(Parameterization param, Orientation orientation, int n0, double scale)
    : param_(std::make_shared<const Parameterization>(std::move(param))), orientation_(orientation),
      samples_(uniform_samples(*param_, n0)), scale_(scale) {
    if (n0 < 3) throw InvalidRegion("a closed curve needs at least 3 samples");
}

OrientedCurve::OrientedCurve(Parameterization param, Orientation orientation, std::vector<CurveSample> samples,
                             double scale)
    : param_(std::make_shared<const Parameterization>(std::move(param))), orientation_(orientation),
      samples_(std::move(samples)), scale_(scale) {}

double OrientedCurve::signed_area() const {
    double area = 0.0;
    for (std::size_t k = 0; k < samples_.size(); ++k) {
        const Vec2 &a = samples_[k].point;
        const Vec2 &b = samples_[(k + 1) % samples_.size()].point;
        area += cross(a, b);
    }
    return 0.5 * area;
}

bool OrientedCurve::orientation_consistent() const {
    const double area = signed_area();
    return orientation_ == Orientation::positive ? area > 0.0 : area < 0.0;
}

int OrientedCurve::winding_about(const Vec2 &p) const {
    int winding = 0;
    for (std::size_t k = 0; k < samples_.size(); ++k) {
        const Vec2 &a = samples_[k].point;
        const Vec2 &b = samples_[(k + 1) % samples_.size()].point;
        const double side = cross(b - a, p - a);
        if (a.y() <= p.y()) {
            if (b.y() > p.y() && side > 0.0) ++winding;
        } else if (b.y() <= p.y() && side < 0.0) {
            --winding;
        }
    }
    return winding;
}

OrientedCurve OrientedCurve::resampled(int n) const {
    return {*param_, orientation_, uniform_samples(*param_, n), scale_};
}

OrientedCurve circle(const Vec2 &center, double radius, int n0) {
    if (!(radius > 0.0)) throw InvalidRegion("circle radius must be positive");
    if (n0 < 16) throw InvalidRegion("circle needs at least 16 initial samples");
    return {[center, radius](double s) {
                const double a = kTwoPi * s;
                return Vec2(center.x() + radius * std::cos(a), center.y() + radius * std::sin(a));
            },
            Orientation::positive, n0, radius};
}

OrientedCurve sector_boundary(const Vec2 &center, double r0, double r1, double a0, double a1, int n0) {
    if (!(r0 >= 0.0 && r1 > r0 && a1 > a0)) throw InvalidRegion("degenerate sector");
    // Pieces, in order: radial out at a0, outer arc a0→a1, radial in at a1,
    // inner arc a1→a0. Parameter share is proportional to length.
    const double radial = r1 - r0;
    const double outer = r1 * (a1 - a0);
    const double inner = r0 * (a1 - a0);
    const double total = 2.0 * radial + outer + inner;
    const double b1 = radial / total;
    const double b2 = (radial + outer) / total;
    const double b3 = (2.0 * radial + outer) / total;
    auto polar = [center](double rho, double alpha) {
        return Vec2(center.x() + rho * std::cos(alpha), center.y() + rho * std::sin(alpha));
    };
    auto param = [=](double s) -> Vec2 {
        if (s < b1) return polar(r0 + radial * (s / b1), a0);
        if (s < b2) return polar(r1, a0 + (a1 - a0) * (s - b1) / (b2 - b1));
        if (s < b3) return polar(r1 - radial * (s - b2) / (b3 - b2), a1);
        if (inner <= 0.0) return polar(0.0, a0);
        return polar(r0, a1 - (a1 - a0) * (s - b3) / (1.0 - b3));
    };
    return {param, Orientation::positive, n0, 0.5 * std::hypot(radial, 0.5 * (r0 + r1) * (a1 - a0))};
}

GeneralizedAnnulus annulus_of_circles(double r_in, double r_out, int n0) {
    if (!(r_in > 0.0 && r_out > r_in)) throw InvalidRegion("annulus requires 0 < r_in < r_out");
    GeneralizedAnnulus a{circle(Vec2::Zero(), r_out, n0), circle(Vec2::Zero(), r_in, n0), true,
                         std::make_pair(Ball{Vec2::Zero(), r_in}, Ball{Vec2::Zero(), r_out})};
    return a;
}

void validate_annulus(const GeneralizedAnnulus &annulus) {
    if (!annulus.outer.orientation_consistent() || !annulus.inner.orientation_consistent()) {
        throw InvalidRegion("annulus boundary orientation is inconsistent with its samples");
    }
    for (const auto &s : annulus.inner.samples()) {
        if (annulus.outer.winding_about(s.point) != 1) {
            throw InvalidRegion("inner boundary is not strictly inside the outer boundary");
        }
    }
    if (annulus.contains_origin_inner && annulus.inner.winding_about(Vec2::Zero()) != 1) {
        throw InvalidRegion("origin is not inside the inner boundary");
    }
}

std::vector<std::pair<OrientedCurve, int>> boundary_components(const Region &region, int n0) {
    std::vector<std::pair<OrientedCurve, int>> out;
    if (const auto *ball = std::get_if<Ball>(&region)) {
        out.emplace_back(circle(ball->center, ball->radius, n0), +1);
    } else if (const auto *jordan = std::get_if<JordanRegion>(&region)) {
        out.emplace_back(jordan->boundary, +1);
    } else {
        const auto &annulus = std::get<GeneralizedAnnulus>(region);
        out.emplace_back(annulus.outer, +1);
        out.emplace_back(annulus.inner, -1);
    }
    return out;
}

OriginPlacement origin_placement(const Region &region) {
    if (const auto *ball = std::get_if<Ball>(&region)) {
        const double d = ball->center.norm();
        const double tol = 1e-12 * ball->radius;
        if (d < ball->radius - tol) return OriginPlacement::inside;
        if (d > ball->radius + tol) return OriginPlacement::outside_closure;
        return OriginPlacement::on_boundary;
    }
    if (const auto *jordan = std::get_if<JordanRegion>(&region)) {
        return jordan->boundary.winding_about(Vec2::Zero()) != 0 ? OriginPlacement::inside
                                                                  : OriginPlacement::outside_closure;
    }
    const auto &annulus = std::get<GeneralizedAnnulus>(region);
    if (annulus.inner.winding_about(Vec2::Zero()) != 0) return OriginPlacement::outside_closure;
    return annulus.outer.winding_about(Vec2::Zero()) != 0 ? OriginPlacement::inside
                                                           : OriginPlacement::outside_closure;
}

double region_scale(const Region &region) {
    if (const auto *ball = std::get_if<Ball>(&region)) return ball->radius;
    if (const auto *jordan = std::get_if<JordanRegion>(&region)) return jordan->boundary.scale();
    return std::get<GeneralizedAnnulus>(region).outer.scale();
}

RefineResult refine_partial(const OrientedCurve &curve, const SplitPredicate &needs_split, RefineLimits limits) {
    Refiner refiner(curve, needs_split, limits);
    const auto &old = curve.samples();
    std::vector<CurveSample> out;
    out.reserve(old.size() * 2);
    for (std::size_t k = 0; k < old.size(); ++k) {
        out.push_back(old[k]);
        const CurveSample next = k + 1 < old.size() ? old[k + 1] : CurveSample{1.0, old.front().point};
        refiner.gap(old[k], next, 0, out);
    }
    return {OrientedCurve(*curve.parameterization(), curve.orientation(), std::move(out), curve.scale()),
            !refiner.stopped(), refiner.depth_reached()};
}

OrientedCurve refine(const OrientedCurve &curve, const SplitPredicate &needs_split, int max_depth) {
    if (max_depth > 40) throw InvalidConfig("refine max_depth must be at most 40");
    auto result = refine_partial(curve, needs_split, RefineLimits{max_depth, 1u << 16});
    if (!result.complete) {
        std::ostringstream os;
        os << "boundary refinement stopped at depth " << result.depth_reached << " with " << result.curve.size()
           << " samples";
        throw RefinementLimit(os.str());
    }
    return std::move(result.curve);
}

}  // namespace rotodeg
