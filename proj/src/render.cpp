#include "rotodeg/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace rotodeg {

namespace {

constexpr int kCanvas = 480;
constexpr int kMargin = 40;
constexpr int kArrows = 12;
constexpr double kClip = 0.45;

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

std::vector<Ball> circles_of(const std::vector<Region> &regions) {
    std::vector<Ball> out;
    for (const auto &region : regions) {
        if (const auto *b = std::get_if<Ball>(&region)) out.push_back(*b);
        else if (const auto *a = std::get_if<GeneralizedAnnulus>(&region); a && a->circles) {
            out.push_back(a->circles->first);
            out.push_back(a->circles->second);
        }
    }
    return out;
}

struct Arrow {
    Vec2 base;
    Vec2 tip;
    bool clipped;
};

struct Frame {
    Vec2 lo;
    double scale;  // pixels per unit
    // SVG y grows downwards.
    [[nodiscard]] Vec2 px(const Vec2 &p) const {
        return {kMargin + (p.x() - lo.x()) * scale, kCanvas - kMargin - (p.y() - lo.y()) * scale};
    }
};

}  // namespace

std::string to_string(SnapshotKind which) { return which == SnapshotKind::f_T ? "f_T" : "F_T_chart"; }

std::string render_snapshot(FlowSampler &sampler, const std::vector<Region> &regions, SnapshotKind which) {
    std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(kCanvas) + "\" height=\"" +
                      std::to_string(kCanvas) + "\" viewBox=\"0 0 " + std::to_string(kCanvas) + " " +
                      std::to_string(kCanvas) + "\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    const auto circles = circles_of(regions);
    if (circles.empty()) return svg + "</svg>\n";

    std::vector<Arrow> arrows;
    Vec2 lo = Vec2::Constant(std::numeric_limits<double>::infinity());
    Vec2 hi = -lo;
    for (const auto &c : circles) {
        for (int k = 0; k < kArrows; ++k) {
            const double a = kTwoPi * k / kArrows;
            const Vec2 x = c.center + c.radius * Vec2(std::cos(a), std::sin(a));
            Vec2 base = x;
            Vec2 v;
            if (which == SnapshotKind::f_T) {
                v = sampler.f(x);
            } else {
                base = plane_to_chart(x);
                v = sampler.F(x);
            }
            const double cap = kClip * c.radius;
            const bool clipped = v.norm() > cap;
            if (clipped) v *= cap / v.norm();
            arrows.push_back({base, base + v, clipped});
            lo = lo.cwiseMin(base).cwiseMin(base + v);
            hi = hi.cwiseMax(base).cwiseMax(base + v);
        }
        if (which == SnapshotKind::f_T) {
            lo = lo.cwiseMin(c.center - Vec2::Constant(c.radius));
            hi = hi.cwiseMax(c.center + Vec2::Constant(c.radius));
        }
    }
    if (which == SnapshotKind::F_T_chart) {
        lo = lo.cwiseMin(Vec2(0.0, 0.0));
        hi = hi.cwiseMax(Vec2(kTwoPi, 0.0));
    }
    const double extent = std::max({hi.x() - lo.x(), hi.y() - lo.y(), 1e-12});
    const Frame frame{lo, (kCanvas - 2.0 * kMargin) / extent};

    svg += "<defs><marker id=\"head\" markerWidth=\"8\" markerHeight=\"6\" refX=\"8\" refY=\"3\" orient=\"auto\">"
           "<path d=\"M0,0 L8,3 L0,6 z\" fill=\"black\"/></marker></defs>\n";
    if (which == SnapshotKind::f_T) {
        for (const auto &c : circles) {
            const Vec2 p = frame.px(c.center);
            svg += "<circle cx=\"" + fmt(p.x()) + "\" cy=\"" + fmt(p.y()) + "\" r=\"" + fmt(c.radius * frame.scale) +
                   "\" fill=\"none\" stroke=\"#888\"/>\n";
        }
    } else {
        for (const auto &c : circles) {
            // Circles about the origin are horizontal lines r = const in the chart.
            if (c.center.norm() > 0.0) continue;
            const Vec2 a = frame.px({0.0, c.radius});
            const Vec2 b = frame.px({kTwoPi, c.radius});
            svg += "<line x1=\"" + fmt(a.x()) + "\" y1=\"" + fmt(a.y()) + "\" x2=\"" + fmt(b.x()) + "\" y2=\"" +
                   fmt(b.y()) + "\" stroke=\"#888\"/>\n";
        }
    }
    for (const auto &arrow : arrows) {
        const Vec2 a = frame.px(arrow.base);
        const Vec2 b = frame.px(arrow.tip);
        svg += "<line x1=\"" + fmt(a.x()) + "\" y1=\"" + fmt(a.y()) + "\" x2=\"" + fmt(b.x()) + "\" y2=\"" +
               fmt(b.y()) + "\" stroke=\"black\" marker-end=\"url(#head)\"/>\n";
        if (arrow.clipped) {
            svg += "<circle class=\"clipped\" cx=\"" + fmt(b.x()) + "\" cy=\"" + fmt(b.y()) +
                   "\" r=\"3\" fill=\"none\" stroke=\"red\"/>\n";
        }
    }
    svg += "<text x=\"8\" y=\"16\" font-size=\"12\">" + to_string(which) + ", 1 unit = " + fmt(frame.scale) +
           " px, arrows clipped at 0.45 r</text>\n";
    return svg + "</svg>\n";
}

}  // namespace rotodeg
