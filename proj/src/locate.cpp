#include "rotodeg/locate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Dense>

#include "rotodeg/parallel.hpp"

namespace rotodeg {

namespace {

struct CellDegree {
    PlaneMap map;
    Vec2 target;
};

CellDegree cell_map(FlowSampler &sampler, std::optional<int> i) {
    if (i) return {[&sampler](const Vec2 &x) { return sampler.F(x); }, IntegerTarget::of(*i).value};
    return {[&sampler](const Vec2 &x) { return sampler.f(x); }, Vec2::Zero()};
}

std::optional<DegreeReport> try_degree(const CellDegree &m, const Cell &cell, const DegreeConfig &cfg) {
    try {
        return winding_number(m.map, cell_boundary(cell, cfg.n0), m.target, cfg);
    } catch (const BoundaryZero &) {
        return std::nullopt;
    }
}

class TreeBuilder {
  public:
    TreeBuilder(FlowSampler &sampler, std::optional<int> i, const LocateConfig &cfg)
        : map_(cell_map(sampler, i)), cfg_(cfg) {
        result_.tree.i = i;
    }

    LocalizeResult build(const std::vector<Cell> &root_candidates) {
        std::optional<DegreeReport> root_degree;
        for (const auto &root : root_candidates) {
            root_degree = try_degree(map_, root, cfg_.degree);
            if (root_degree && root_degree->certified) {
                result_.tree.nodes.push_back({root, *root_degree, 0, -1, {}});
                break;
            }
        }
        if (result_.tree.nodes.empty()) {
            throw BoundaryZero(cell_midpoint(root_candidates.front()), 0.0,
                               "could not certify the degree on the search region boundary");
        }
        std::vector<int> level{0};
        while (!level.empty()) {
            std::vector<int> next;
            for (int index : level) expand(index, next);
            level = std::move(next);
        }
        for (std::size_t k = 0; k < result_.tree.nodes.size(); ++k) {
            const auto &node = result_.tree.nodes[k];
            if (node.children.empty() && node.degree.value != 0 && node.degree.certified) {
                result_.leaves.push_back(static_cast<int>(k));
            }
        }
        return std::move(result_);
    }

  private:
    void expand(int index, std::vector<int> &next) {
        const CellNode parent = result_.tree.nodes[static_cast<std::size_t>(index)];
        if (parent.degree.value == 0) return;
        if (parent.depth >= cfg_.max_depth || cell_diameter(parent.cell) < cfg_.min_diameter) return;
        for (int attempt = 0; attempt < 4; ++attempt) {
            // Retries move the split lines by 1e-6 of the cell size.
            const auto children = split_cell(parent.cell, 1e-6 * attempt);
            std::array<DegreeReport, 4> degrees;
            bool ok = true;
            int sum = 0;
            for (std::size_t c = 0; c < 4 && ok; ++c) {
                const auto d = try_degree(map_, children[c], cfg_.degree);
                ok = d && d->certified;
                if (ok) {
                    degrees[c] = *d;
                    sum += d->value;
                }
            }
            if (!ok || sum != parent.degree.value) continue;
            for (std::size_t c = 0; c < 4; ++c) {
                const int child = static_cast<int>(result_.tree.nodes.size());
                result_.tree.nodes.push_back({children[c], degrees[c], parent.depth + 1, index, {}});
                result_.tree.nodes[static_cast<std::size_t>(index)].children.push_back(child);
                if (degrees[c].value != 0) next.push_back(child);
            }
            return;
        }
    }

    CellDegree map_;
    const LocateConfig &cfg_;
    LocalizeResult result_;
};

struct NewtonResult {
    Vec2 x;
    double residual;
};

Mat2 displacement_jacobian(FlowSampler &sampler, const Vec2 &x, double h) {
    Mat2 jac;
    for (int k = 0; k < 2; ++k) {
        Vec2 e = Vec2::Zero();
        e[k] = h;
        jac.col(k) = (sampler.f(x + e) - sampler.f(x - e)) / (2.0 * h);
    }
    return jac;
}

NewtonResult newton(FlowSampler &sampler, const Vec2 &seed, int max_iterations, double tol) {
    Vec2 x = seed;
    Vec2 f = sampler.f(x);
    double res = f.norm();
    for (int it = 0; it < max_iterations; ++it) {
        const double scale = std::max(1.0, x.norm());
        if (res < 1e-2 * tol * scale) break;
        const Mat2 jac = displacement_jacobian(sampler, x, 1e-6 * scale);
        Vec2 dx;
        if (std::abs(jac.determinant()) > 1e-14 * jac.squaredNorm()) {
            dx = -jac.partialPivLu().solve(f);
        } else {
            // Singular: steepest descent on |f|²/2.
            const Vec2 grad = jac.transpose() * f;
            dx = grad.squaredNorm() > 0.0 ? Vec2(-(res * res) / grad.squaredNorm() * grad) : Vec2::Zero();
        }
        if (!dx.allFinite() || dx.norm() == 0.0) break;
        // Backtracking on the residual.
        double lambda = 1.0;
        bool improved = false;
        while (lambda > 1e-6) {
            const Vec2 trial = x + lambda * dx;
            Vec2 ft;
            try {
                ft = sampler.f(trial);
            } catch (const BlowUp &) {
                lambda *= 0.5;
                continue;
            }
            if (ft.norm() < (1.0 - 1e-4 * lambda) * res) {
                x = trial;
                f = ft;
                res = ft.norm();
                improved = true;
                break;
            }
            lambda *= 0.5;
        }
        if (!improved) break;
        if (lambda * dx.norm() < 1e-14 * scale && res < tol) break;
    }
    return {x, res};
}

PeriodicOrbit make_orbit(FlowSampler &sampler, const NewtonResult &r, const std::optional<Cell> &enclosure) {
    PeriodicOrbit orbit;
    orbit.point = r.x;
    orbit.residual = r.residual;
    orbit.enclosure = enclosure;
    orbit.rotation_value = sampler.rotation(r.x);
    orbit.rotation = static_cast<int>(std::lround(orbit.rotation_value));
    if (std::abs(orbit.rotation_value - orbit.rotation) > 1e-6) {
        std::ostringstream os;
        os << "fixed point at (" << r.x.x() << ", " << r.x.y() << ") has non-integer rotation "
           << orbit.rotation_value;
        throw Inconsistent(os.str());
    }
    return orbit;
}

bool in_annulus(const GeneralizedAnnulus &annulus, const Vec2 &p) {
    if (annulus.circles) {
        const auto &[inner, outer] = *annulus.circles;
        const double d_in = (p - inner.center).norm();
        const double d_out = (p - outer.center).norm();
        return d_in > inner.radius && d_out < outer.radius;
    }
    return annulus.outer.winding_about(p) != 0 && annulus.inner.winding_about(p) == 0;
}

bool separated(const std::vector<PeriodicOrbit> &orbits, const Vec2 &p, double threshold) {
    return std::all_of(orbits.begin(), orbits.end(),
                       [&](const PeriodicOrbit &o) { return (o.point - p).norm() > threshold; });
}

std::vector<PeriodicOrbit> residual_sweep(FlowSampler &sampler, const GeneralizedAnnulus &annulus,
                                          const LocateConfig &cfg) {
    double extent = 0.0;
    Vec2 lo = Vec2::Constant(std::numeric_limits<double>::infinity());
    Vec2 hi = -lo;
    for (const auto &s : annulus.outer.samples()) {
        lo = lo.cwiseMin(s.point);
        hi = hi.cwiseMax(s.point);
    }
    extent = std::max(hi.x() - lo.x(), hi.y() - lo.y());
    const int n = cfg.sweep_grid;
    const double h = extent / n;
    auto grid_point = [&](int a, int b) { return Vec2(lo.x() + (a + 0.5) * h, lo.y() + (b + 0.5) * h); };

    std::vector<double> residual(static_cast<std::size_t>(n * n), std::numeric_limits<double>::infinity());
    parallel_for(residual.size(), [&](std::size_t k) {
        const Vec2 p = grid_point(static_cast<int>(k) / n, static_cast<int>(k) % n);
        if (!in_annulus(annulus, p)) return;
        try {
            residual[k] = sampler.f(p).norm();
        } catch (const BlowUp &) {
        }
    });

    std::vector<std::pair<double, Vec2>> minima;
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            const double v = residual[static_cast<std::size_t>(a * n + b)];
            if (!std::isfinite(v)) continue;
            bool is_min = true;
            for (int da = -1; da <= 1 && is_min; ++da) {
                for (int db = -1; db <= 1 && is_min; ++db) {
                    const int aa = a + da;
                    const int bb = b + db;
                    if ((da == 0 && db == 0) || aa < 0 || bb < 0 || aa >= n || bb >= n) continue;
                    is_min = v <= residual[static_cast<std::size_t>(aa * n + bb)];
                }
            }
            if (is_min) minima.emplace_back(v, grid_point(a, b));
        }
    }
    std::sort(minima.begin(), minima.end(), [](const auto &l, const auto &r) { return l.first < r.first; });
    if (minima.size() > static_cast<std::size_t>(cfg.sweep_candidates)) {
        minima.resize(static_cast<std::size_t>(cfg.sweep_candidates));
    }

    std::vector<PeriodicOrbit> found;
    for (const auto &[v, seed] : minima) {
        const auto r = newton(sampler, seed, cfg.sweep_newton_iterations, cfg.orbit_tol);
        if (!(r.residual < cfg.orbit_tol) || !in_annulus(annulus, r.x)) continue;
        try {
            auto orbit = make_orbit(sampler, r, std::nullopt);
            orbit.best_effort = true;
            found.push_back(orbit);
        } catch (const Error &) {
        }
    }
    return found;
}

}  // namespace

Vec2 cell_midpoint(const Cell &cell) {
    if (const auto *s = std::get_if<SectorCell>(&cell)) {
        const double rho = 0.5 * (s->r0 + s->r1);
        const double alpha = 0.5 * (s->a0 + s->a1);
        return s->center + rho * Vec2(std::cos(alpha), std::sin(alpha));
    }
    const auto &b = std::get<BoxCell>(cell);
    return {0.5 * (b.x0 + b.x1), 0.5 * (b.y0 + b.y1)};
}

double cell_diameter(const Cell &cell) {
    if (const auto *s = std::get_if<SectorCell>(&cell)) {
        return std::min(2.0 * s->r1, (s->r1 - s->r0) + s->r1 * (s->a1 - s->a0));
    }
    const auto &b = std::get<BoxCell>(cell);
    return std::hypot(b.x1 - b.x0, b.y1 - b.y0);
}

bool cell_contains(const Cell &cell, const Vec2 &p) {
    if (const auto *s = std::get_if<SectorCell>(&cell)) {
        const Vec2 rel = p - s->center;
        const double rho = rel.norm();
        if (rho < s->r0 || rho > s->r1) return false;
        double alpha = std::atan2(rel.y(), rel.x());
        alpha = s->a0 + std::fmod(std::fmod(alpha - s->a0, kTwoPi) + kTwoPi, kTwoPi);
        return alpha <= s->a1;
    }
    const auto &b = std::get<BoxCell>(cell);
    return p.x() >= b.x0 && p.x() <= b.x1 && p.y() >= b.y0 && p.y() <= b.y1;
}

OrientedCurve cell_boundary(const Cell &cell, int n0) {
    if (const auto *s = std::get_if<SectorCell>(&cell)) return sector_boundary(s->center, s->r0, s->r1, s->a0, s->a1, n0);
    const auto b = std::get<BoxCell>(cell);
    const double w = b.x1 - b.x0;
    const double h = b.y1 - b.y0;
    const double per = 2.0 * (w + h);
    auto param = [=](double s) -> Vec2 {
        double d = s * per;
        if (d < w) return {b.x0 + d, b.y0};
        d -= w;
        if (d < h) return {b.x1, b.y0 + d};
        d -= h;
        if (d < w) return {b.x1 - d, b.y1};
        d -= w;
        return {b.x0, b.y1 - d};
    };
    return {param, Orientation::positive, n0, 0.5 * std::hypot(w, h)};
}

std::array<Cell, 4> split_cell(const Cell &cell, double jitter) {
    if (const auto *s = std::get_if<SectorCell>(&cell)) {
        const double rm = 0.5 * (s->r0 + s->r1) + jitter * (s->r1 - s->r0);
        const double am = 0.5 * (s->a0 + s->a1) + jitter * (s->a1 - s->a0);
        return {SectorCell{s->center, s->r0, rm, s->a0, am}, SectorCell{s->center, s->r0, rm, am, s->a1},
                SectorCell{s->center, rm, s->r1, s->a0, am}, SectorCell{s->center, rm, s->r1, am, s->a1}};
    }
    const auto &b = std::get<BoxCell>(cell);
    const double xm = 0.5 * (b.x0 + b.x1) + jitter * (b.x1 - b.x0);
    const double ym = 0.5 * (b.y0 + b.y1) + jitter * (b.y1 - b.y0);
    return {BoxCell{b.x0, xm, b.y0, ym}, BoxCell{xm, b.x1, b.y0, ym}, BoxCell{b.x0, xm, ym, b.y1},
            BoxCell{xm, b.x1, ym, b.y1}};
}

LocalizeResult localize(FlowSampler &sampler, const Region &region, int i, const LocateConfig &cfg) {
    std::vector<Cell> roots;
    // The full-turn sector boundary is a keyhole; alternative cut angles are
    // tried if the map vanishes on the cut.
    constexpr double kCutAngles[] = {0.0, 0.7854, 2.3562, 3.9270};
    if (const auto *annulus = std::get_if<GeneralizedAnnulus>(&region)) {
        if (!annulus->circles) throw InvalidRegion("localize needs an annulus of circles");
        const auto &[inner, outer] = *annulus->circles;
        if ((inner.center - outer.center).norm() > 0.0) throw InvalidRegion("localize needs concentric circles");
        for (double a : kCutAngles) roots.emplace_back(SectorCell{inner.center, inner.radius, outer.radius, a, a + kTwoPi});
    } else if (const auto *ball = std::get_if<Ball>(&region)) {
        if (origin_placement(region) != OriginPlacement::outside_closure) {
            throw InvalidRegion("G_i is undefined at the origin; localize on a ball away from it or on an annulus");
        }
        for (double a : kCutAngles) roots.emplace_back(SectorCell{ball->center, 0.0, ball->radius, a, a + kTwoPi});
    } else {
        throw InvalidRegion("localize supports annuli of circles and balls");
    }
    return TreeBuilder(sampler, i, cfg).build(roots);
}

LocalizeResult localize(const TimeVaryingField &field, const Region &region, int i, const LocateConfig &cfg) {
    FlowSampler sampler(field, cfg.degree.integrator);
    return localize(sampler, region, i, cfg);
}

LocalizeResult localize_displacement(FlowSampler &sampler, const Ball &ball, const LocateConfig &cfg) {
    const double r = ball.radius;
    const Vec2 c = ball.center;
    std::vector<Cell> roots;
    for (double pad : {1.0, 1.01, 1.03}) {
        roots.emplace_back(BoxCell{c.x() - pad * r, c.x() + pad * r, c.y() - pad * r, c.y() + pad * r});
    }
    return TreeBuilder(sampler, std::nullopt, cfg).build(roots);
}

PeriodicOrbit refine_orbit(FlowSampler &sampler, const Vec2 &seed, std::optional<int> i,
                           const std::optional<Cell> &enclosure, const LocateConfig &cfg) {
    auto r = newton(sampler, seed, cfg.newton_iterations, cfg.orbit_tol);
    if (r.residual < cfg.orbit_tol) return make_orbit(sampler, r, enclosure);
    if (enclosure) {
        // Bisection on the degree: descend into a child cell that still
        // carries nonzero degree and restart Newton from its middle.
        const auto m = cell_map(sampler, i);
        Cell cell = *enclosure;
        for (int level = 0; level < 12; ++level) {
            bool descended = false;
            for (const auto &child : split_cell(cell)) {
                const auto d = try_degree(m, child, cfg.degree);
                if (d && d->certified && d->value != 0) {
                    cell = child;
                    descended = true;
                    break;
                }
            }
            if (!descended) break;
            r = newton(sampler, cell_midpoint(cell), cfg.newton_iterations, cfg.orbit_tol);
            if (r.residual < cfg.orbit_tol) return make_orbit(sampler, r, enclosure);
        }
    }
    std::ostringstream os;
    os << "Newton did not converge from (" << seed.x() << ", " << seed.y() << "); best residual " << r.residual;
    throw NoConvergence(os.str());
}

PeriodicOrbit refine_orbit(const TimeVaryingField &field, const Vec2 &seed, int i, const LocateConfig &cfg) {
    FlowSampler sampler(field, cfg.degree.integrator);
    return refine_orbit(sampler, seed, i, std::nullopt, cfg);
}

std::pair<std::complex<double>, std::complex<double>> floquet_multipliers(FlowSampler &sampler,
                                                                          const PeriodicOrbit &orbit) {
    const double scale = std::max(1.0, orbit.point.norm());
    const double h = 1e-6 * scale;
    const Mat2 identity = Mat2::Identity();
    const Mat2 m1 = displacement_jacobian(sampler, orbit.point, h) + identity;
    const Mat2 m2 = displacement_jacobian(sampler, orbit.point, 2.0 * h) + identity;
    if (!m1.allFinite() || (m1 - m2).norm() > 1e-4 * m1.norm()) {
        throw IllConditioned("finite-difference monodromy is not stable under step halving");
    }
    const double tr = m1.trace();
    const double det = m1.determinant();
    const std::complex<double> root = std::sqrt(std::complex<double>(0.25 * tr * tr - det, 0.0));
    return {0.5 * tr + root, 0.5 * tr - root};
}

std::pair<std::complex<double>, std::complex<double>> floquet_multipliers(const TimeVaryingField &field,
                                                                          const PeriodicOrbit &orbit,
                                                                          const IntegratorConfig &cfg) {
    FlowSampler sampler(field, cfg);
    return floquet_multipliers(sampler, orbit);
}

OrbitCheck reverify_orbit(const TimeVaryingField &field, const PeriodicOrbit &orbit, double tol) {
    IntegratorConfig cfg;
    cfg.method = IntegratorMethod::rk4_fixed;
    cfg.step_h = field.period_T / 20000.0;
    OrbitCheck check;
    const auto d = displacements(field, orbit.point, cfg);
    check.residual = d.f.norm();
    check.rotation_value = d.F.x() / kTwoPi;
    check.ok = check.residual < tol && std::abs(d.F.x() - kTwoPi * orbit.rotation) < 1e-5;
    return check;
}

FindAllReport find_all(FlowSampler &sampler, const GeneralizedAnnulus &annulus, const LocateConfig &cfg) {
    validate_annulus(annulus);
    FindAllReport report;
    const auto &dcfg = cfg.degree;
    report.twist = check_twist(sampler, annulus, dcfg);
    if (report.twist.indeterminate) report.diagnostics.emplace_back("twist condition is indeterminate");
    report.deg_inner = brouwer_deg_fT(sampler, JordanRegion{annulus.inner}, dcfg);
    report.deg_outer = brouwer_deg_fT(sampler, JordanRegion{annulus.outer}, dcfg);

    std::vector<int> candidates = report.twist.sigma_in.sigma_wide;
    for (int i : report.twist.sigma_out.sigma_wide) {
        if (std::find(candidates.begin(), candidates.end(), i) == candidates.end()) candidates.push_back(i);
    }
    std::sort(candidates.begin(), candidates.end());

    const double threshold = cfg.separation * annulus.outer.scale();
    std::vector<PeriodicOrbit> certified;
    for (int i : candidates) {
        const auto consistency = annulus_consistency(sampler, annulus, i, dcfg);
        report.annulus_degrees.emplace(i, consistency);
        if (!consistency.holds) {
            report.diagnostics.push_back("annulus degree for i = " + std::to_string(i) + " is not consistent");
        }
        if (consistency.direct.value == 0 && consistency.outer.value - consistency.inner.value == 0) continue;
        if (!annulus.circles) {
            report.diagnostics.emplace_back("cell localization needs circular boundaries; skipped");
            continue;
        }
        const auto cells = localize(sampler, annulus, i, cfg);
        for (int leaf : cells.leaves) {
            const auto &node = cells.tree.nodes[static_cast<std::size_t>(leaf)];
            try {
                auto orbit = refine_orbit(sampler, cell_midpoint(node.cell), i, node.cell, cfg);
                if (in_annulus(annulus, orbit.point) && separated(certified, orbit.point, threshold)) {
                    certified.push_back(orbit);
                }
            } catch (const NoConvergence &e) {
                report.diagnostics.emplace_back(e.what());
            }
        }
    }
    report.orbits = certified;

    if (report.deg_inner.value == 0 && report.deg_outer.value == 0 && annulus.circles) {
        const Ball inner = annulus.circles->first;
        const auto cells = localize_displacement(sampler, inner, cfg);
        for (int leaf : cells.leaves) {
            const auto &node = cells.tree.nodes[static_cast<std::size_t>(leaf)];
            const auto r = newton(sampler, cell_midpoint(node.cell), cfg.newton_iterations, cfg.orbit_tol);
            if (!(r.residual < cfg.orbit_tol) || (r.x - inner.center).norm() >= inner.radius) continue;
            if (!separated(report.disk_orbits, r.x, threshold)) continue;
            PeriodicOrbit orbit;
            orbit.point = r.x;
            orbit.residual = r.residual;
            orbit.enclosure = node.cell;
            try {
                orbit.rotation_value = sampler.rotation(r.x);
                orbit.rotation = static_cast<int>(std::lround(orbit.rotation_value));
            } catch (const OriginCrossing &) {
                report.diagnostics.emplace_back("disk orbit at the origin has no rotation number");
            }
            report.disk_orbits.push_back(orbit);
        }
    }

    if (cfg.best_effort_sweep) {
        for (auto &orbit : residual_sweep(sampler, annulus, cfg)) {
            if (separated(report.orbits, orbit.point, threshold)) report.orbits.push_back(orbit);
        }
    }

    auto has_rotation_in = [&](const std::vector<int> &sigma) {
        return std::any_of(report.orbits.begin(), report.orbits.end(), [&](const PeriodicOrbit &o) {
            return !o.best_effort && std::find(sigma.begin(), sigma.end(), o.rotation) != sigma.end();
        });
    };
    if (report.twist.twist && !report.twist.indeterminate) {
        if (report.deg_inner.value != 1) report.inner_guarantee_met = has_rotation_in(report.twist.sigma_in.sigma_wide);
        if (report.deg_outer.value != 1) report.outer_guarantee_met = has_rotation_in(report.twist.sigma_out.sigma_wide);
    }
    if (!report.inner_guarantee_met) report.diagnostics.emplace_back("no orbit found for the inner boundary");
    if (!report.outer_guarantee_met) report.diagnostics.emplace_back("no orbit found for the outer boundary");
    return report;
}

FindAllReport find_all(const TimeVaryingField &field, const GeneralizedAnnulus &annulus, const LocateConfig &cfg) {
    FlowSampler sampler(field, cfg.degree.integrator);
    return find_all(sampler, annulus, cfg);
}

}  // namespace rotodeg
