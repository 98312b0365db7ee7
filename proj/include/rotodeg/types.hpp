#pragma once

#include <Eigen/Core>
#include <Eigen/LU>

namespace rotodeg {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Planar cross product a × b.
inline double cross(const Vec2 &a, const Vec2 &b) { return a.x() * b.y() - a.y() * b.x(); }

/// Signed angle from a to b in (-π, π], counterclockwise positive.
double signed_angle(const Vec2 &a, const Vec2 &b);

/// Canonical clockwise polar chart: (θ, r) ↦ (r cos θ, −r sin θ).
Vec2 chart_to_plane(double theta, double r);

/// Preimage of a nonzero point under the clockwise chart with θ in [0, 2π).
Vec2 plane_to_chart(const Vec2 &z);

}  // namespace rotodeg
