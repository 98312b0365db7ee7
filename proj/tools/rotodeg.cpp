// rotodeg command line: runs analyses on a built-in scenario and writes
// JSON/CSV/SVG artifacts, or recomputes the exit status of saved reports.
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <sstream>

#include <CLI11.hpp>

#include "rotodeg/parallel.hpp"
#include "rotodeg/render.hpp"
#include "rotodeg/report.hpp"

namespace fs = std::filesystem;
using namespace rotodeg;

namespace {

constexpr int kExitInput = 2;

std::vector<std::string> split(const std::string &s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::vector<std::string> default_regions(ScenarioId id) {
    switch (id) {
    case ScenarioId::rigid_rotation: return {"ball:0,0,2", "ball:5,3,1"};
    case ScenarioId::example51: return {"annulus:1,4", "ball:0,0,1", "ball:0,0,4"};
    case ScenarioId::expansive_spiral: return {"annulus:1,3", "ball:0,0,1", "ball:0,0,3"};
    default: return {"ball:0,0,1"};
    }
}

void write_file(const fs::path &path, const std::string &content) {
    std::ofstream out(path);
    if (!out) throw InvalidConfig("cannot write " + path.string());
    out << content;
}

int fail_input(const std::string &code, const std::string &message) {
    std::cout << error_json(code, message).dump(2) << "\n";
    return kExitInput;
}

struct RunOptions {
    std::string scenario;
    std::string scenario_json;
    std::vector<std::string> params;
    std::string analyses = "decomposition,twist";
    std::vector<std::string> regions;
    bool regions_given = false;
    std::string out = "rotodeg-out";
    std::string formats = "json";
    std::string trajectory;
};

ScenarioSpec scenario_from(const RunOptions &opt) {
    ScenarioSpec spec;
    if (!opt.scenario_json.empty()) {
        std::ifstream in(opt.scenario_json);
        if (!in) throw InvalidConfig("cannot read " + opt.scenario_json);
        json j;
        try {
            j = json::parse(in);
        } catch (const json::exception &e) {
            throw InvalidConfig(std::string("scenario file: ") + e.what());
        }
        if (!j.contains("name") || !j["name"].is_string()) throw InvalidConfig("scenario file needs a \"name\" string");
        spec.name = parse_scenario_id(j["name"].get<std::string>());
        const json params = j.value("params", json::object());
        if (!params.is_object()) throw InvalidConfig("scenario file: \"params\" must be an object");
        for (const auto &[k, v] : params.items()) {
            if (!v.is_number()) throw InvalidParams("parameter '" + k + "' is not a number");
            spec.params[k] = v.get<double>();
        }
    } else {
        if (opt.scenario.empty()) throw InvalidConfig("no scenario given");
        spec.name = parse_scenario_id(opt.scenario);
    }
    for (const auto &kv : opt.params) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw InvalidParams("expected k=v, got '" + kv + "'");
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(kv.substr(eq + 1), &used);
        } catch (const std::exception &) {
        }
        if (used == 0 || used != kv.size() - eq - 1) throw InvalidParams("bad value in '" + kv + "'");
        spec.params[kv.substr(0, eq)] = v;
    }
    return spec;
}

int run(const RunOptions &opt) {
    ScenarioSpec spec;
    TimeVaryingField field;
    std::vector<RegionSpec> regions;
    std::vector<std::string> analyses;
    std::vector<std::string> formats;
    std::optional<Vec2> trajectory_start;
    try {
        spec = scenario_from(opt);
        field = build_scenario(spec);
        const auto region_texts = !opt.regions_given ? default_regions(spec.name) : opt.regions;
        for (const auto &r : region_texts) {
            if (!r.empty()) regions.push_back(parse_region(r));
        }
        analyses = split(opt.analyses, ',');
        if (analyses.empty()) throw InvalidConfig("at least one analysis is required");
        const auto &known = analysis_names();
        for (const auto &a : analyses) {
            if (std::find(known.begin(), known.end(), a) == known.end()) throw InvalidConfig("unknown analysis '" + a + "'");
        }
        std::sort(analyses.begin(), analyses.end());
        analyses.erase(std::unique(analyses.begin(), analyses.end()), analyses.end());
        formats = split(opt.formats, ',');
        for (const auto &f : formats) {
            if (f != "json" && f != "csv" && f != "svg") throw InvalidConfig("unknown format '" + f + "'");
        }
        if (!opt.trajectory.empty()) {
            const auto xy = split(opt.trajectory, ',');
            if (xy.size() != 2) throw InvalidConfig("--trajectory expects x,y");
            trajectory_start = Vec2(std::stod(xy[0]), std::stod(xy[1]));
        }
        fs::create_directories(opt.out);
    } catch (const Error &e) {
        return fail_input(e.code(), e.what());
    } catch (const std::exception &e) {
        return fail_input("InvalidConfig", e.what());
    }
    auto has = [&](const std::string &f) { return std::find(formats.begin(), formats.end(), f) != formats.end(); };

    FlowSampler sampler(field, IntegratorConfig{});
    std::vector<json> reports(analyses.size());
    parallel_for(analyses.size(), [&](std::size_t k) { reports[k] = run_analysis(analyses[k], sampler, spec, regions); });

    const fs::path dir(opt.out);
    for (std::size_t k = 0; k < analyses.size(); ++k) {
        const auto &r = reports[k];
        if (has("json")) write_file(dir / (analyses[k] + ".json"), r.dump(2) + "\n");
        std::cout << analyses[k] << ": " << (r.value("holds", false) ? "holds" : "FAILS") << ", "
                  << (r.value("certified", false) ? "certified" : "NOT certified") << "\n";
        if (analyses[k] == "locate" && has("csv") && r.contains("results")) {
            std::string csv = "region,x,y,rotation,residual,best_effort\n";
            for (const auto &res : r["results"]) {
                for (const auto &o : res["orbits"]) {
                    csv += res["region"].get<std::string>() + "," + o["point"][0].dump() + "," + o["point"][1].dump() +
                           "," + o["rotation"].dump() + "," + o["residual"].dump() + "," + o["best_effort"].dump() + "\n";
                }
            }
            write_file(dir / "orbits.csv", csv);
        }
    }
    try {
        if (has("svg")) {
            std::vector<Region> plain;
            for (const auto &r : regions) plain.push_back(r.region);
            for (auto which : {SnapshotKind::f_T, SnapshotKind::F_T_chart}) {
                write_file(dir / (to_string(which) + ".svg"), render_snapshot(sampler, plain, which));
            }
        }
        if (trajectory_start) {
            const auto path = lifted_orbit(field, *trajectory_start, IntegratorConfig{});
            json j = to_json(path);
            round_floats(j);
            if (has("json")) write_file(dir / "trajectory.json", j.dump(2) + "\n");
            if (has("csv")) {
                std::string csv = "t,x,y,theta,r\n";
                for (const auto &row : j["rows"]) {
                    csv += row[0].dump() + "," + row[1].dump() + "," + row[2].dump() + "," + row[3].dump() + "," +
                           row[4].dump() + "\n";
                }
                write_file(dir / "trajectory.csv", csv);
            }
        }
    } catch (const Error &e) {
        std::cout << error_json(e.code(), e.what()).dump(2) << "\n";
        return 1;
    }
    return exit_status(reports);
}

int status(const std::string &dir) {
    std::vector<json> reports;
    std::error_code ec;
    std::vector<fs::path> files;
    for (const auto &entry : fs::directory_iterator(dir, ec)) {
        if (entry.path().extension() == ".json" && entry.path().filename() != "trajectory.json") files.push_back(entry.path());
    }
    if (ec) return fail_input("InvalidConfig", "cannot read directory " + dir);
    std::sort(files.begin(), files.end());
    for (const auto &f : files) {
        std::ifstream in(f);
        try {
            auto j = json::parse(in);
            if (!j.contains("op")) continue;
            std::cout << j["op"].get<std::string>() << ": " << (j.value("holds", false) ? "holds" : "FAILS") << ", "
                      << (j.value("certified", false) ? "certified" : "NOT certified") << "\n";
            reports.push_back(std::move(j));
        } catch (const json::exception &e) {
            return fail_input("InvalidConfig", f.string() + ": " + e.what());
        }
    }
    if (reports.empty()) return fail_input("InvalidConfig", "no reports in " + dir);
    return exit_status(reports);
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Degree and rotation-number analysis of periodic planar systems"};
    app.require_subcommand(1);

    RunOptions opt;
    auto *run_cmd = app.add_subcommand("run", "Run analyses on a scenario");
    run_cmd->add_option("scenario", opt.scenario, "Scenario name")->check(CLI::IsMember(scenario_names()));
    run_cmd->add_option("--scenario-json", opt.scenario_json, "JSON file {\"name\": ..., \"params\": {...}}");
    run_cmd->add_option("--param", opt.params, "Scenario parameter k=v (repeatable)");
    run_cmd->add_option("--analyses", opt.analyses, "Comma separated analyses")->capture_default_str();
    auto *regions_opt = run_cmd->add_option("--regions", opt.regions, "Regions: ball:cx,cy,r or annulus:r_in,r_out")
                            ->expected(0, -1)
                            ->allow_extra_args();
    run_cmd->add_option("--out", opt.out, "Output directory")->capture_default_str();
    run_cmd->add_option("--formats", opt.formats, "Subset of json,csv,svg")->capture_default_str();
    run_cmd->add_option("--trajectory", opt.trajectory, "Also write the lifted orbit from x,y");

    std::string status_dir;
    auto *status_cmd = app.add_subcommand("status", "Exit status of saved reports");
    status_cmd->add_option("dir", status_dir, "Report directory")->required();

    app.add_subcommand("scenarios", "List scenarios and their default parameters");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        return fail_input("InvalidConfig", e.what());
    }

    if (*run_cmd) {
        opt.regions_given = regions_opt->count() > 0;
        return run(opt);
    }
    if (*status_cmd) return status(status_dir);
    for (const auto &name : scenario_names()) {
        std::cout << name;
        for (const auto &[k, v] : default_params(parse_scenario_id(name))) std::cout << " " << k << "=" << v;
        std::cout << "\n";
    }
    return 0;
}
