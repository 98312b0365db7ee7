#include "rotodeg/degree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "rotodeg/parallel.hpp"

namespace rotodeg {

namespace {

// Values of a plane map at curve parameters; parameter 1 aliases 0.
class ValueCache {
  public:
    ValueCache(const PlaneMap &g, const OrientedCurve &curve) : g_(g) {
        const auto &samples = curve.samples();
        std::vector<Vec2> values(samples.size());
        parallel_for(samples.size(), [&](std::size_t k) { values[k] = g(samples[k].point); });
        for (std::size_t k = 0; k < samples.size(); ++k) values_.emplace(samples[k].param, values[k]);
    }

    const Vec2 &at(const CurveSample &s) {
        const double key = s.param >= 1.0 ? 0.0 : s.param;
        auto it = values_.find(key);
        if (it == values_.end()) it = values_.emplace(key, g_(s.point)).first;
        return it->second;
    }

  private:
    const PlaneMap &g_;
    std::map<double, Vec2> values_;
};

std::vector<int> integers_between(double lo, double hi) {
    std::vector<int> out;
    if (!(lo <= hi)) return out;
    for (auto n = static_cast<long>(std::ceil(lo)); n <= static_cast<long>(std::floor(hi)); ++n) {
        out.push_back(static_cast<int>(n));
    }
    return out;
}

void accumulate(DegreeReport &total, const DegreeReport &part, int sign, bool first) {
    total.value += sign * part.value;
    total.boundary_clearance = first ? part.boundary_clearance : std::min(total.boundary_clearance, part.boundary_clearance);
    total.max_angular_step = std::max(total.max_angular_step, part.max_angular_step);
    total.samples_used += part.samples_used;
    total.certified = (first || total.certified) && part.certified;
}

DegreeReport degree_over_region(const PlaneMap &g, const Region &region, const Vec2 &target,
                                const DegreeConfig &cfg) {
    DegreeReport total;
    bool first = true;
    for (const auto &[curve, sign] : boundary_components(region, cfg.n0)) {
        accumulate(total, winding_number(g, curve, target, cfg), sign, first);
        first = false;
    }
    return total;
}

bool intersects(const std::vector<int> &a, const std::vector<int> &b) {
    return std::any_of(a.begin(), a.end(), [&](int v) { return std::find(b.begin(), b.end(), v) != b.end(); });
}

}  // namespace

DegreeReport winding_number(const PlaneMap &g, const OrientedCurve &curve, const Vec2 &target,
                            const DegreeConfig &cfg) {
    ValueCache cache(g, curve);
    auto shifted = [&](const CurveSample &s) -> Vec2 { return cache.at(s) - target; };
    const SplitPredicate needs_split = [&](const CurveSample &a, const CurveSample &b) {
        const Vec2 va = shifted(a);
        const Vec2 vb = shifted(b);
        if (va.norm() == 0.0 || vb.norm() == 0.0) return false;
        return std::abs(signed_angle(va, vb)) >= kPi / 2.0;
    };
    const RefineResult refined = refine_partial(curve, needs_split, cfg.refine);

    const auto &samples = refined.curve.samples();
    double total = 0.0;
    double max_step = 0.0;
    double clearance = std::numeric_limits<double>::infinity();
    Vec2 worst = samples.front().point;
    for (std::size_t k = 0; k < samples.size(); ++k) {
        const Vec2 va = shifted(samples[k]);
        const Vec2 vb = shifted(k + 1 < samples.size() ? samples[k + 1] : CurveSample{1.0, samples.front().point});
        const double step = signed_angle(va, vb);
        total += step;
        max_step = std::max(max_step, std::abs(step));
        if (va.norm() < clearance) {
            clearance = va.norm();
            worst = samples[k].point;
        }
    }
    const double threshold = cfg.clearance_tol * curve.scale();
    if (!(clearance > threshold)) {
        std::ostringstream os;
        os << "map comes within " << clearance << " of the target at boundary point (" << worst.x() << ", "
           << worst.y() << ")";
        throw BoundaryZero(worst, clearance, os.str());
    }
    const int sign = curve.orientation() == Orientation::positive ? 1 : -1;
    DegreeReport report;
    report.value = sign * static_cast<int>(std::lround(total / kTwoPi));
    report.boundary_clearance = clearance;
    report.max_angular_step = max_step;
    report.samples_used = static_cast<int>(samples.size());
    report.certified = refined.complete && max_step < kPi / 2.0;
    return report;
}

DegreeReport brouwer_deg_fT(FlowSampler &sampler, const Region &region, const DegreeConfig &cfg) {
    return degree_over_region([&](const Vec2 &x) { return sampler.f(x); }, region, Vec2::Zero(), cfg);
}

DegreeReport brouwer_deg_fT(const TimeVaryingField &field, const Region &region, const DegreeConfig &cfg) {
    FlowSampler sampler(field, cfg.integrator);
    return brouwer_deg_fT(sampler, region, cfg);
}

DegreeReport dee_degree(FlowSampler &sampler, const Region &region, int i, const DegreeConfig &cfg) {
    return degree_over_region([&](const Vec2 &x) { return sampler.F(x); }, region, IntegerTarget::of(i).value, cfg);
}

DegreeReport dee_degree(const TimeVaryingField &field, const Region &region, int i, const DegreeConfig &cfg) {
    FlowSampler sampler(field, cfg.integrator);
    return dee_degree(sampler, region, i, cfg);
}

RotationSummary summarize_rotations(double min_rot, double max_rot, double integer_margin, int samples) {
    RotationSummary s;
    s.min_rot = min_rot;
    s.max_rot = max_rot;
    s.sigma = integers_between(min_rot, max_rot);
    s.sigma_wide = integers_between(min_rot - integer_margin, max_rot + integer_margin);
    s.sigma_narrow = integers_between(min_rot + integer_margin, max_rot - integer_margin);
    auto dist = [](double v) { return std::abs(v - std::round(v)); };
    s.clearance_to_integers = std::min(dist(min_rot), dist(max_rot));
    s.grazing = s.clearance_to_integers < integer_margin;
    s.samples = samples;
    return s;
}

RotationSummary sigma_set(FlowSampler &sampler, const OrientedCurve &curve, const DegreeConfig &cfg) {
    const auto &initial = curve.samples();
    parallel_for(initial.size(), [&](std::size_t k) { sampler.F(initial[k].point); });
    const SplitPredicate needs_split = [&](const CurveSample &a, const CurveSample &b) {
        return std::abs(sampler.rotation(a.point) - sampler.rotation(b.point)) >= cfg.sigma_step;
    };
    const RefineResult refined = refine_partial(curve, needs_split, cfg.refine);
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto &s : refined.curve.samples()) {
        const double rot = sampler.rotation(s.point);
        lo = std::min(lo, rot);
        hi = std::max(hi, rot);
    }
    auto summary = summarize_rotations(lo, hi, cfg.integer_margin, static_cast<int>(refined.curve.size()));
    summary.complete = refined.complete;
    return summary;
}

RotationSummary sigma_set(const TimeVaryingField &field, const OrientedCurve &curve, const DegreeConfig &cfg) {
    FlowSampler sampler(field, cfg.integrator);
    return sigma_set(sampler, curve, cfg);
}

RotationSummary sigma_set(FlowSampler &sampler, const Region &region, const DegreeConfig &cfg) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    int samples = 0;
    bool complete = true;
    for (const auto &[curve, sign] : boundary_components(region, cfg.n0)) {
        const auto part = sigma_set(sampler, curve, cfg);
        lo = std::min(lo, part.min_rot);
        hi = std::max(hi, part.max_rot);
        samples += part.samples;
        complete = complete && part.complete;
    }
    auto summary = summarize_rotations(lo, hi, cfg.integer_margin, samples);
    summary.complete = complete;
    return summary;
}

DecompositionReport verify_decomposition(FlowSampler &sampler, const Region &region, const DegreeConfig &cfg) {
    DecompositionReport report;
    switch (origin_placement(region)) {
    case OriginPlacement::inside: report.origin_term = 1; break;
    case OriginPlacement::outside_closure: report.origin_term = 0; break;
    case OriginPlacement::on_boundary: throw InvalidRegion("the origin lies on the region boundary");
    }
    report.fT = brouwer_deg_fT(sampler, region, cfg);
    report.lhs = report.fT.value;
    report.sigma = sigma_set(sampler, region, cfg);
    report.rhs = report.origin_term;
    bool certified = report.fT.certified;
    for (int i : report.sigma.sigma) {
        const auto d = dee_degree(sampler, region, i, cfg);
        report.per_i.emplace(i, d);
        report.rhs += d.value;
        if (!d.certified) {
            certified = false;
            report.diagnostics.push_back("generalized degree for i = " + std::to_string(i) + " is not certified");
        }
    }
    if (!report.fT.certified) report.diagnostics.emplace_back("deg(f_T) is not certified");
    if (report.sigma.grazing) {
        certified = false;
        report.diagnostics.emplace_back("an integer grazes the rotation range; sigma is ambiguous");
    }
    if (!report.sigma.complete) {
        certified = false;
        report.diagnostics.emplace_back("rotation sampling did not reach the requested resolution");
    }
    if (report.lhs != report.rhs) report.diagnostics.emplace_back("lhs and rhs differ");
    report.holds = certified && report.lhs == report.rhs;
    return report;
}

DecompositionReport verify_decomposition(const TimeVaryingField &field, const Region &region,
                                         const DegreeConfig &cfg) {
    FlowSampler sampler(field, cfg.integrator);
    return verify_decomposition(sampler, region, cfg);
}

OrientedCurve keyhole_contour(const GeneralizedAnnulus &annulus, double shift, int n0) {
    auto perimeter = [](const OrientedCurve &c) {
        double len = 0.0;
        const auto &s = c.samples();
        for (std::size_t k = 0; k < s.size(); ++k) len += (s[(k + 1) % s.size()].point - s[k].point).norm();
        return len;
    };
    const OrientedCurve outer = annulus.outer;
    const OrientedCurve inner = annulus.inner;
    const Vec2 cut_out = outer.at(shift - std::floor(shift));
    const Vec2 cut_in = inner.at(shift - std::floor(shift));
    const double l_out = perimeter(outer);
    const double l_in = perimeter(inner);
    const double l_cut = (cut_out - cut_in).norm();
    const double total = l_out + l_in + 2.0 * l_cut;
    const double b1 = l_out / total;
    const double b2 = (l_out + l_cut) / total;
    const double b3 = (l_out + l_cut + l_in) / total;
    auto wrap = [](double s) { return s - std::floor(s); };
    auto param = [=](double s) -> Vec2 {
        if (s < b1) return outer.at(wrap(shift + s / b1));
        if (s < b2) return cut_out + (cut_in - cut_out) * ((s - b1) / (b2 - b1));
        if (s < b3) return inner.at(wrap(shift + 1.0 - (s - b2) / (b3 - b2)));
        return cut_in + (cut_out - cut_in) * ((s - b3) / (1.0 - b3));
    };
    return {param, Orientation::positive, n0, outer.scale()};
}

AnnulusConsistencyReport annulus_consistency(FlowSampler &sampler, const GeneralizedAnnulus &annulus, int i,
                                             const DegreeConfig &cfg) {
    AnnulusConsistencyReport report;
    report.i = i;
    const Vec2 target = IntegerTarget::of(i).value;
    const PlaneMap chart_map = [&](const Vec2 &x) { return sampler.F(x); };
    // The cut runs through the interior, where G_i may vanish; move it if so.
    constexpr double kShifts[] = {0.0, 0.1234, 0.3141, 0.5772};
    for (std::size_t attempt = 0; attempt < std::size(kShifts); ++attempt) {
        try {
            report.direct = winding_number(chart_map, keyhole_contour(annulus, kShifts[attempt], 3 * cfg.n0), target, cfg);
            if (report.direct.certified) break;
        } catch (const BoundaryZero &) {
            if (attempt + 1 == std::size(kShifts)) throw;
        }
    }
    report.outer = dee_degree(sampler, JordanRegion{annulus.outer}, i, cfg);
    report.inner = dee_degree(sampler, JordanRegion{annulus.inner}, i, cfg);
    report.holds = report.direct.certified && report.outer.certified && report.inner.certified &&
                   report.direct.value == report.outer.value - report.inner.value;
    return report;
}

AnnulusConsistencyReport annulus_consistency(const TimeVaryingField &field, const GeneralizedAnnulus &annulus, int i,
                                             const DegreeConfig &cfg) {
    FlowSampler sampler(field, cfg.integrator);
    return annulus_consistency(sampler, annulus, i, cfg);
}

TwistReport check_twist(FlowSampler &sampler, const GeneralizedAnnulus &annulus, const DegreeConfig &cfg) {
    TwistReport report;
    report.sigma_in = sigma_set(sampler, annulus.inner, cfg);
    report.sigma_out = sigma_set(sampler, annulus.outer, cfg);
    const bool wide_disjoint = !intersects(report.sigma_in.sigma_wide, report.sigma_out.sigma_wide);
    const bool narrow_meet = intersects(report.sigma_in.sigma_narrow, report.sigma_out.sigma_narrow);
    report.twist = wide_disjoint;
    report.indeterminate = !wide_disjoint && !narrow_meet;
    if (!report.sigma_in.complete || !report.sigma_out.complete) report.indeterminate = true;
    return report;
}

TwistReport check_twist(const TimeVaryingField &field, const GeneralizedAnnulus &annulus, const DegreeConfig &cfg) {
    FlowSampler sampler(field, cfg.integrator);
    return check_twist(sampler, annulus, cfg);
}

}  // namespace rotodeg
