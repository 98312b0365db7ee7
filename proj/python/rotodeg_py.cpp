#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "rotodeg/linear.hpp"
#include "rotodeg/locate.hpp"
#include "rotodeg/render.hpp"
#include "rotodeg/report.hpp"

namespace py = pybind11;
using namespace rotodeg;

namespace {

// Reports cross the boundary as JSON text and come back as Python dicts.
py::object to_py(const json &j) {
    return py::module_::import("json").attr("loads")(j.dump());
}

Region region_of(const std::string &spec) { return parse_region(spec).region; }

GeneralizedAnnulus annulus_of(const std::string &spec) {
    auto r = parse_region(spec).region;
    if (auto *a = std::get_if<GeneralizedAnnulus>(&r)) return *a;
    throw InvalidRegion("expected an annulus region, got '" + spec + "'");
}

}  // namespace

PYBIND11_MODULE(rotodeg, m) {
    m.doc() = "Degree and rotation-number tools for periodic planar systems.";

    py::register_exception<Error>(m, "Error", PyExc_RuntimeError);

    py::class_<TimeVaryingField>(m, "Field")
        .def_readonly("period", &TimeVaryingField::period_T)
        .def_readonly("name", &TimeVaryingField::name)
        .def("__call__", [](const TimeVaryingField &f, double t, const Vec2 &z) { return evaluate_field(f, t, z); },
             py::arg("t"), py::arg("z"));

    m.def("scenario_names", &scenario_names);
    m.def("default_params", [](const std::string &name) { return default_params(parse_scenario_id(name)); });
    m.def(
        "scenario",
        [](const std::string &name, const std::map<std::string, double> &params) {
            return build_scenario({parse_scenario_id(name), params});
        },
        py::arg("name"), py::arg("params") = std::map<std::string, double>{});
    m.def(
        "linear_field",
        [](const Mat2 &A, double T) { return to_field(constant_system(A, T)); }, py::arg("A"), py::arg("T"));

    m.def(
        "evolve_point", [](const TimeVaryingField &f, const Vec2 &x, double t) { return evolve_point(f, x, t, {}); },
        py::arg("field"), py::arg("x"), py::arg("t"));
    m.def(
        "rotation_number", [](const TimeVaryingField &f, const Vec2 &x) { return rotation_number(f, x, {}); },
        py::arg("field"), py::arg("x"));
    m.def(
        "displacement", [](const TimeVaryingField &f, const Vec2 &x) { return displacement_fT(f, x, {}); },
        py::arg("field"), py::arg("x"));
    m.def(
        "chart_displacement", [](const TimeVaryingField &f, const Vec2 &x) { return displacement_FT(f, x, {}); },
        py::arg("field"), py::arg("x"));

    m.def(
        "degree",
        [](const TimeVaryingField &f, const std::string &region) {
            return to_py(to_json(brouwer_deg_fT(f, region_of(region))));
        },
        py::arg("field"), py::arg("region"));
    m.def(
        "dee_degree",
        [](const TimeVaryingField &f, const std::string &region, int i) {
            return to_py(to_json(dee_degree(f, region_of(region), i)));
        },
        py::arg("field"), py::arg("region"), py::arg("i"));
    m.def(
        "sigma",
        [](const TimeVaryingField &f, const std::string &region) {
            FlowSampler sampler(f, {});
            return to_py(to_json(sigma_set(sampler, region_of(region))));
        },
        py::arg("field"), py::arg("region"));
    m.def(
        "decomposition",
        [](const TimeVaryingField &f, const std::string &region) {
            return to_py(to_json(verify_decomposition(f, region_of(region))));
        },
        py::arg("field"), py::arg("region"));
    m.def(
        "twist",
        [](const TimeVaryingField &f, const std::string &annulus) {
            return to_py(to_json(check_twist(f, annulus_of(annulus))));
        },
        py::arg("field"), py::arg("annulus"));
    m.def(
        "find_all",
        [](const TimeVaryingField &f, const std::string &annulus, bool sweep) {
            LocateConfig cfg;
            cfg.best_effort_sweep = sweep;
            return to_py(to_json(find_all(f, annulus_of(annulus), cfg)));
        },
        py::arg("field"), py::arg("annulus"), py::arg("sweep") = true);

    m.def(
        "monodromy", [](const Mat2 &A, double T) { return monodromy(constant_system(A, T)); }, py::arg("A"),
        py::arg("T"));
    m.def("linear_degree", &linear_degree, py::arg("M"));
    m.def(
        "maslov_index", [](const Mat2 &A, double T) { return maslov_index(constant_system(A, T)); }, py::arg("A"),
        py::arg("T"));

    m.def(
        "run_analysis",
        [](const std::string &analysis, const std::string &scenario, const std::map<std::string, double> &params,
           const std::vector<std::string> &regions) {
            const ScenarioSpec spec{parse_scenario_id(scenario), params};
            FlowSampler sampler(build_scenario(spec), {});
            std::vector<RegionSpec> parsed;
            for (const auto &r : regions) parsed.push_back(parse_region(r));
            return to_py(run_analysis(analysis, sampler, spec, parsed));
        },
        py::arg("analysis"), py::arg("scenario"), py::arg("params") = std::map<std::string, double>{},
        py::arg("regions") = std::vector<std::string>{});
    m.def(
        "render_snapshot",
        [](const TimeVaryingField &f, const std::vector<std::string> &regions, const std::string &which) {
            FlowSampler sampler(f, {});
            std::vector<Region> parsed;
            for (const auto &r : regions) parsed.push_back(region_of(r));
            if (which != "f_T" && which != "F_T_chart") throw InvalidConfig("which must be f_T or F_T_chart");
            return render_snapshot(sampler, parsed, which == "f_T" ? SnapshotKind::f_T : SnapshotKind::F_T_chart);
        },
        py::arg("field"), py::arg("regions"), py::arg("which") = "f_T");
}
