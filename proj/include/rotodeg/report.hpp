#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "rotodeg/degree.hpp"
#include "rotodeg/linear.hpp"
#include "rotodeg/locate.hpp"

namespace rotodeg {

using nlohmann::json;

inline constexpr int kReportSchema = 1;

/// A region together with the text it was parsed from.
struct RegionSpec {
    std::string text;
    Region region;
};

/// `ball:cx,cy,r` or `annulus:r_in,r_out` (origin-centered). Throws InvalidRegion.
RegionSpec parse_region(const std::string &text);

/// The analyses the runner knows, in report order.
const std::vector<std::string> &analysis_names();

struct AnalysisConfig {
    LocateConfig locate;
    LinearConfig linear;
};

/// Runs one analysis over the regions and returns its report. Errors raised by
/// the toolkit are caught and recorded under "error"; the report then has
/// "holds": false. Throws InvalidConfig for an unknown analysis name.
json run_analysis(const std::string &name, FlowSampler &sampler, const ScenarioSpec &scenario,
                  const std::vector<RegionSpec> &regions, const AnalysisConfig &cfg = {});

/// 0 when every report holds and is certified, 1 otherwise.
int exit_status(const std::vector<json> &reports);

/// Rounds every floating-point value to 12 significant digits, in place.
void round_floats(json &j);

json error_json(const std::string &code, const std::string &message);
json to_json(const Region &region);
json to_json(const DegreeReport &d);
json to_json(const RotationSummary &s);
json to_json(const DecompositionReport &d);
json to_json(const AnnulusConsistencyReport &a);
json to_json(const TwistReport &t);
json to_json(const PeriodicOrbit &o);
json to_json(const FindAllReport &r);
json to_json(const AsymptoticRadiusReport &r);
json to_json(const LiftedPath &path);

}  // namespace rotodeg
