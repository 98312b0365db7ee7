// Independent reference values used by the tests. Nothing here calls the
// library's integrators or degree code.
#pragma once

#include <cmath>
#include <complex>

#include "rotodeg/types.hpp"

namespace oracle {

// Period of u'' + u^3 = 0 at amplitude 1: T1 = 4 sqrt(2) ∫_0^{π/2} dφ / sqrt(1 + sin²φ),
// by composite Simpson.
inline double duffing_unit_period() {
    constexpr int n = 20000;
    const double h = (rotodeg::kPi / 2) / n;
    auto g = [](double phi) { return 1.0 / std::sqrt(1.0 + std::sin(phi) * std::sin(phi)); };
    double sum = g(0.0) + g(rotodeg::kPi / 2);
    for (int k = 1; k < n; ++k) sum += (k % 2 ? 4.0 : 2.0) * g(k * h);
    return 4.0 * std::sqrt(2.0) * sum * h / 3.0;
}

// (u, w) at time s on the amplitude-1 orbit from (1, 0), classical RK4.
inline rotodeg::Vec2 duffing_unit_state(double s) {
    const int n = std::max(1, static_cast<int>(std::ceil(s / 1e-4)));
    const double h = s / n;
    auto rhs = [](const rotodeg::Vec2 &z) { return rotodeg::Vec2(z.y(), -z.x() * z.x() * z.x()); };
    rotodeg::Vec2 z(1.0, 0.0);
    for (int k = 0; k < n; ++k) {
        const auto k1 = rhs(z);
        const auto k2 = rhs(z + 0.5 * h * k1);
        const auto k3 = rhs(z + 0.5 * h * k2);
        const auto k4 = rhs(z + h * k3);
        z += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return z;
}

// Clockwise turns over [0, T] from (a, 0). The amplitude-a solution is
// (a u1(a t), a² w1(a t)); the phase angle decreases monotonically, so the
// partial turn is the clockwise angle of the end point.
inline double duffing_rotation(double a, double T) {
    const double T1 = duffing_unit_period();
    const double phase = a * T;
    const double full = std::floor(phase / T1);
    const rotodeg::Vec2 z1 = duffing_unit_state(phase - full * T1);
    const rotodeg::Vec2 z(a * z1.x(), a * a * z1.y());
    double theta = std::atan2(-z.y(), z.x());
    if (theta < 0.0) theta += rotodeg::kTwoPi;
    return full + theta / rotodeg::kTwoPi;
}

// Winding number of a closed polygon of values about 0 by dense angle summation.
template <class Map>
int dense_winding(const Map &g, const rotodeg::Vec2 &center, double radius, int n = 200000) {
    double total = 0.0;
    rotodeg::Vec2 prev = g(center + radius * rotodeg::Vec2(1.0, 0.0));
    for (int k = 1; k <= n; ++k) {
        const double a = rotodeg::kTwoPi * k / n;
        const rotodeg::Vec2 cur = g(center + radius * rotodeg::Vec2(std::cos(a), std::sin(a)));
        total += std::atan2(prev.x() * cur.y() - prev.y() * cur.x(), prev.dot(cur));
        prev = cur;
    }
    return static_cast<int>(std::lround(total / rotodeg::kTwoPi));
}

}  // namespace oracle
