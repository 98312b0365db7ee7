#include "rotodeg/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>


namespace rotodeg {

namespace {

std::vector<double> parse_numbers(const std::string &body, const std::string &text) {
    std::vector<double> out;
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception &) {
            used = 0;
        }
        if (used == 0 || used != item.size() || !std::isfinite(v)) {
            throw InvalidRegion("bad number '" + item + "' in region '" + text + "'");
        }
        out.push_back(v);
    }
    return out;
}

json vec(const Vec2 &v) { return json::array({v.x(), v.y()}); }

json cell_json(const Cell &cell) {
    if (const auto *s = std::get_if<SectorCell>(&cell)) {
        return {{"kind", "sector"}, {"center", vec(s->center)}, {"r0", s->r0}, {"r1", s->r1}, {"a0", s->a0}, {"a1", s->a1}};
    }
    const auto &b = std::get<BoxCell>(cell);
    return {{"kind", "box"}, {"x0", b.x0}, {"x1", b.x1}, {"y0", b.y0}, {"y1", b.y1}};
}

// Integers from floor(min_rot) to ceil(max_rot): Σ plus its neighbours.
std::vector<int> probe_integers(const RotationSummary &s) {
    std::vector<int> out;
    for (int i = static_cast<int>(std::floor(s.min_rot)); i <= static_cast<int>(std::ceil(s.max_rot)); ++i) out.push_back(i);
    return out;
}

struct Outcome {
    bool holds = true;
    bool certified = true;
};

json degree_analysis(FlowSampler &sampler, const std::vector<RegionSpec> &regions, const DegreeConfig &cfg, Outcome &out) {
    json results = json::array();
    for (const auto &r : regions) {
        const auto d = brouwer_deg_fT(sampler, r.region, cfg);
        out.certified = out.certified && d.certified;
        json j = to_json(d);
        j["region"] = r.text;
        results.push_back(j);
    }
    return results;
}

json dee_analysis(FlowSampler &sampler, const std::vector<RegionSpec> &regions, const DegreeConfig &cfg, Outcome &out) {
    json results = json::array();
    for (const auto &r : regions) {
        const auto sigma = sigma_set(sampler, r.region, cfg);
        json per_i = json::array();
        for (int i : probe_integers(sigma)) {
            const auto d = dee_degree(sampler, r.region, i, cfg);
            out.certified = out.certified && d.certified;
            json j = to_json(d);
            j["i"] = i;
            per_i.push_back(j);
        }
        results.push_back({{"region", r.text}, {"degrees", per_i}});
    }
    return results;
}

json sigma_analysis(FlowSampler &sampler, const std::vector<RegionSpec> &regions, const DegreeConfig &cfg, Outcome &out) {
    json results = json::array();
    for (const auto &r : regions) {
        const auto s = sigma_set(sampler, r.region, cfg);
        out.certified = out.certified && s.complete && !s.grazing;
        json j = to_json(s);
        j["region"] = r.text;
        results.push_back(j);
    }
    return results;
}

json decomposition_analysis(FlowSampler &sampler, const std::vector<RegionSpec> &regions, const DegreeConfig &cfg,
                            Outcome &out) {
    json results = json::array();
    for (const auto &r : regions) {
        const auto d = verify_decomposition(sampler, r.region, cfg);
        out.holds = out.holds && d.holds;
        json j = to_json(d);
        j["region"] = r.text;
        if (const auto *annulus = std::get_if<GeneralizedAnnulus>(&r.region)) {
            json formula = json::array();
            for (int i : d.sigma.sigma_wide) {
                const auto a = annulus_consistency(sampler, *annulus, i, cfg);
                out.holds = out.holds && a.holds;
                formula.push_back(to_json(a));
            }
            j["annulus_formula"] = formula;
        }
        results.push_back(j);
    }
    return results;
}

json twist_analysis(FlowSampler &sampler, const std::vector<RegionSpec> &regions, const DegreeConfig &cfg, Outcome &out) {
    json results = json::array();
    for (const auto &r : regions) {
        const auto *annulus = std::get_if<GeneralizedAnnulus>(&r.region);
        if (!annulus) continue;
        const auto t = check_twist(sampler, *annulus, cfg);
        out.certified = out.certified && !t.indeterminate;
        json j = to_json(t);
        j["region"] = r.text;
        results.push_back(j);
    }
    return results;
}

json locate_analysis(FlowSampler &sampler, const std::vector<RegionSpec> &regions, const LocateConfig &cfg, Outcome &out) {
    json results = json::array();
    for (const auto &r : regions) {
        const auto *annulus = std::get_if<GeneralizedAnnulus>(&r.region);
        if (!annulus) continue;
        auto report = find_all(sampler, *annulus, cfg);
        json checks = json::array();
        for (auto &orbit : report.orbits) {
            try {
                orbit.multipliers = floquet_multipliers(sampler, orbit);
            } catch (const IllConditioned &e) {
                report.diagnostics.emplace_back(e.what());
            }
            const auto check = reverify_orbit(sampler.field(), orbit, cfg.orbit_tol);
            if (!orbit.best_effort) out.holds = out.holds && check.ok;
            checks.push_back({{"residual", check.residual}, {"rotation_value", check.rotation_value}, {"ok", check.ok}});
        }
        out.holds = out.holds && report.inner_guarantee_met && report.outer_guarantee_met;
        out.certified = out.certified && !report.twist.indeterminate;
        json j = to_json(report);
        j["region"] = r.text;
        j["reverification"] = checks;
        results.push_back(j);
    }
    return results;
}

json maslov_analysis(FlowSampler &sampler, const LinearConfig &cfg, Outcome &out) {
    json results = json::array();
    for (auto which : {Asymptote::zero, Asymptote::infinity}) {
        const auto &lin = which == Asymptote::zero ? sampler.field().lin_zero : sampler.field().lin_inf;
        if (!lin) continue;
        const auto sys = linearization(sampler.field(), which);
        json j = {{"at", to_string(which)}, {"hamiltonian", sys.hamiltonian_flag}, {"convention", "clockwise"}};
        try {
            const Mat2 M = monodromy(sys, cfg);
            j["monodromy"] = {{M(0, 0), M(0, 1)}, {M(1, 0), M(1, 1)}};
            const int degree = linear_degree(M);
            const auto rot = rotation_interval(sys, cfg);
            j["degree"] = degree;
            j["rot"] = {rot.min, rot.max};
            if (sys.hamiltonian_flag) j["i_T"] = maslov_from(degree, rot, cfg.margin);
        } catch (const Error &e) {
            out.holds = false;
            j["error"] = error_json(e.code(), e.what());
        }
        results.push_back(j);
    }
    return results;
}

json asymptotic_analysis(FlowSampler &sampler, const LinearConfig &cfg, Outcome &out) {
    json results = json::array();
    for (auto which : {Asymptote::zero, Asymptote::infinity}) {
        const auto &lin = which == Asymptote::zero ? sampler.field().lin_zero : sampler.field().lin_inf;
        if (!lin) continue;
        try {
            results.push_back(to_json(asymptotic_radius(sampler.field(), which, cfg)));
        } catch (const Error &e) {
            out.holds = false;
            results.push_back({{"which", to_string(which)}, {"error", error_json(e.code(), e.what())}});
        }
    }
    return results;
}

}  // namespace

RegionSpec parse_region(const std::string &text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw InvalidRegion("region '" + text + "' has no kind prefix");
    const std::string kind = text.substr(0, colon);
    const auto v = parse_numbers(text.substr(colon + 1), text);
    if (kind == "ball") {
        if (v.size() != 3 || !(v[2] > 0.0)) throw InvalidRegion("expected ball:cx,cy,r with r > 0, got '" + text + "'");
        return {text, Ball{Vec2(v[0], v[1]), v[2]}};
    }
    if (kind == "annulus") {
        if (v.size() != 2 || !(v[0] > 0.0) || !(v[1] > v[0])) {
            throw InvalidRegion("expected annulus:r_in,r_out with 0 < r_in < r_out, got '" + text + "'");
        }
        return {text, annulus_of_circles(v[0], v[1])};
    }
    throw InvalidRegion("unknown region kind '" + kind + "'");
}

const std::vector<std::string> &analysis_names() {
    static const std::vector<std::string> names{"asymptotic_radius", "decomposition", "dee",   "degree",
                                                "locate",            "maslov",        "sigma", "twist"};
    return names;
}

json run_analysis(const std::string &name, FlowSampler &sampler, const ScenarioSpec &scenario,
                  const std::vector<RegionSpec> &regions, const AnalysisConfig &cfg) {
    const auto &names = analysis_names();
    if (std::find(names.begin(), names.end(), name) == names.end()) {
        throw InvalidConfig("unknown analysis '" + name + "'");
    }
    json params = json::object();
    for (const auto &[k, v] : scenario.params) params[k] = v;
    json report = {{"schema", kReportSchema}, {"op", name}, {"scenario", to_string(scenario.name)}, {"params", params}};
    Outcome out;
    const auto &dcfg = cfg.locate.degree;
    try {
        json results;
        if (name == "degree") results = degree_analysis(sampler, regions, dcfg, out);
        else if (name == "dee") results = dee_analysis(sampler, regions, dcfg, out);
        else if (name == "sigma") results = sigma_analysis(sampler, regions, dcfg, out);
        else if (name == "decomposition") results = decomposition_analysis(sampler, regions, dcfg, out);
        else if (name == "twist") results = twist_analysis(sampler, regions, dcfg, out);
        else if (name == "locate") results = locate_analysis(sampler, regions, cfg.locate, out);
        else if (name == "maslov") results = maslov_analysis(sampler, cfg.linear, out);
        else results = asymptotic_analysis(sampler, cfg.linear, out);
        report["results"] = results;
    } catch (const Error &e) {
        out.holds = false;
        report["error"] = error_json(e.code(), e.what());
    }
    report["holds"] = out.holds;
    report["certified"] = out.certified;
    round_floats(report);
    return report;
}

int exit_status(const std::vector<json> &reports) {
    for (const auto &r : reports) {
        if (!r.value("holds", false) || !r.value("certified", false)) return 1;
    }
    return 0;
}

void round_floats(json &j) {
    if (j.is_number_float()) {
        const double v = j.get<double>();
        if (!std::isfinite(v)) {
            j = nullptr;
            return;
        }
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.12g", v);
        j = std::strtod(buf, nullptr);
    } else if (j.is_structured()) {
        for (auto &child : j) round_floats(child);
    }
}

json error_json(const std::string &code, const std::string &message) {
    return {{"schema", kReportSchema}, {"error", code}, {"message", message}};
}

json to_json(const Region &region) {
    if (const auto *b = std::get_if<Ball>(&region)) {
        return {{"kind", "ball"}, {"center", vec(b->center)}, {"radius", b->radius}};
    }
    if (const auto *a = std::get_if<GeneralizedAnnulus>(&region)) {
        json j = {{"kind", "annulus"}};
        if (a->circles) {
            j["r_in"] = a->circles->first.radius;
            j["r_out"] = a->circles->second.radius;
        }
        return j;
    }
    return {{"kind", "jordan"}, {"samples", std::get<JordanRegion>(region).boundary.size()}};
}

json to_json(const DegreeReport &d) {
    return {{"value", d.value},
            {"certified", d.certified},
            {"clearance", d.boundary_clearance},
            {"max_angular_step", d.max_angular_step},
            {"samples", d.samples_used}};
}

json to_json(const RotationSummary &s) {
    return {{"min_rot", s.min_rot},
            {"max_rot", s.max_rot},
            {"sigma", s.sigma},
            {"sigma_wide", s.sigma_wide},
            {"sigma_narrow", s.sigma_narrow},
            {"clearance_to_integers", s.clearance_to_integers},
            {"grazing", s.grazing},
            {"complete", s.complete},
            {"samples", s.samples}};
}

json to_json(const DecompositionReport &d) {
    json per_i = json::array();
    for (const auto &[i, deg] : d.per_i) {
        json j = to_json(deg);
        j["i"] = i;
        per_i.push_back(j);
    }
    return {{"lhs", d.lhs},       {"rhs", d.rhs},         {"origin_term", d.origin_term},
            {"holds", d.holds},   {"deg_fT", to_json(d.fT)}, {"sigma", to_json(d.sigma)},
            {"per_i", per_i},     {"diagnostics", d.diagnostics}};
}

json to_json(const AnnulusConsistencyReport &a) {
    return {{"i", a.i},
            {"direct", to_json(a.direct)},
            {"outer", to_json(a.outer)},
            {"inner", to_json(a.inner)},
            {"holds", a.holds}};
}

json to_json(const TwistReport &t) {
    return {{"twist", t.twist},
            {"indeterminate", t.indeterminate},
            {"sigma_in", to_json(t.sigma_in)},
            {"sigma_out", to_json(t.sigma_out)}};
}

json to_json(const PeriodicOrbit &o) {
    json j = {{"point", vec(o.point)},
              {"rotation", o.rotation},
              {"rotation_value", o.rotation_value},
              {"residual", o.residual},
              {"best_effort", o.best_effort}};
    if (o.enclosure) j["enclosure"] = cell_json(*o.enclosure);
    if (o.multipliers) {
        j["multipliers"] = {{o.multipliers->first.real(), o.multipliers->first.imag()},
                            {o.multipliers->second.real(), o.multipliers->second.imag()}};
    }
    return j;
}

json to_json(const FindAllReport &r) {
    json degrees = json::array();
    for (const auto &[i, a] : r.annulus_degrees) degrees.push_back(to_json(a));
    json orbits = json::array();
    for (const auto &o : r.orbits) orbits.push_back(to_json(o));
    json disk = json::array();
    for (const auto &o : r.disk_orbits) disk.push_back(to_json(o));
    return {{"twist", to_json(r.twist)},
            {"deg_inner", to_json(r.deg_inner)},
            {"deg_outer", to_json(r.deg_outer)},
            {"annulus_degrees", degrees},
            {"orbits", orbits},
            {"disk_orbits", disk},
            {"inner_guarantee_met", r.inner_guarantee_met},
            {"outer_guarantee_met", r.outer_guarantee_met},
            {"diagnostics", r.diagnostics}};
}

json to_json(const AsymptoticRadiusReport &r) {
    json trace = json::array();
    for (const auto &p : r.trace) {
        trace.push_back({{"radius", p.radius},
                         {"sigma", p.sigma.sigma},
                         {"rot", {p.sigma.min_rot, p.sigma.max_rot}},
                         {"degree", p.degree},
                         {"certified", p.certified},
                         {"matches", p.matches}});
    }
    return {{"which", to_string(r.which)},
            {"r_star", r.radius},
            {"linear_sigma", r.linear_sigma},
            {"linear_rot", {r.linear_rot.min, r.linear_rot.max}},
            {"linear_degree", r.linear_degree},
            {"trace", trace}};
}

json to_json(const LiftedPath &path) {
    json rows = json::array();
    for (std::size_t k = 0; k < path.times.size(); ++k) {
        rows.push_back({path.times[k], path.points[k].x(), path.points[k].y(), path.theta[k], path.r[k]});
    }
    return {{"columns", {"t", "x", "y", "theta", "r"}}, {"rows", rows}};
}

}  // namespace rotodeg
