#pragma once

#include <string>

#include "mapfr/instance.hpp"
#include "mapfr/plan.hpp"

namespace mapfr {

// Static SVG render: graph edges, per-agent start/goal disks and trajectory
// polyline, plus `samples` time-stamped tick marks along each trajectory
// (samples == 0 draws no ticks). Purely presentational; coordinates go
// through doubles.
std::string render_svg(const Instance& ins, const PrePlan& pre, int samples);

}  // namespace mapfr
