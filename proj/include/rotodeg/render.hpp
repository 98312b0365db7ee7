#pragma once

#include <string>
#include <vector>

#include "rotodeg/boundary.hpp"
#include "rotodeg/sampler.hpp"

namespace rotodeg {

enum class SnapshotKind { f_T, F_T_chart };

/// SVG of displacement arrows at 12 evenly spaced points of every boundary
/// circle of the regions. `f_T` draws plane arrows φ_T(x) − x at x; `F_T_chart`
/// draws (Δθ, Δr) at the chart point (θ, r) of x. Arrows longer than 0.45 of
/// their circle's radius are shortened and end in a ring. Non-circular
/// boundaries are skipped. No regions gives an empty canvas.
std::string render_snapshot(FlowSampler &sampler, const std::vector<Region> &regions, SnapshotKind which);

std::string to_string(SnapshotKind which);

}  // namespace rotodeg
