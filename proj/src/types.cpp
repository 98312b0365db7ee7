#include "rotodeg/types.hpp"

#include <cmath>

namespace rotodeg {

double signed_angle(const Vec2 &a, const Vec2 &b) { return std::atan2(cross(a, b), a.dot(b)); }

Vec2 chart_to_plane(double theta, double r) { return {r * std::cos(theta), -r * std::sin(theta)}; }

Vec2 plane_to_chart(const Vec2 &z) {
    double theta = std::atan2(-z.y(), z.x());
    if (theta < 0.0) theta += kTwoPi;
    if (theta >= kTwoPi) theta -= kTwoPi;
    return {theta, z.norm()};
}

}  // namespace rotodeg
