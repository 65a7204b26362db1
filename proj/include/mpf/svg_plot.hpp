#pragma once

#include "mpf/simulation.hpp"

#include <string>
#include <vector>

namespace mpf {

/// Render the standard plot set for one run into `dir` (created if missing):
/// a four-panel trajectory view, the target-relative path, and time series
/// for position error, attitude error, path speed, and both rate references.
/// Output is plain SVG text, byte-stable for identical logs. Returns the
/// paths written, always seven, in a fixed order.
std::vector<std::string> write_plots(const TrajectoryLog& log, const std::string& dir);

} // namespace mpf
