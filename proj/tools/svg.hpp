#pragma once

// Minimal SVG writers for trajectory overlays and bifurcation scatters.

#include <iosfwd>
#include <optional>
#include <span>
#include <string>

#include "pfcycle/analysis.hpp"

namespace pfcycle::tools {

/// x_n vs n for every run; per-phase corridor endpoints as dashed lines.
void write_trajectory_svg(std::ostream& out, std::span<const Trajectory> runs, const PhaseCorridor* corridor,
                          const std::string& title);

/// One dot per attractor sample, parameter on the horizontal axis.
void write_bifurcation_svg(std::ostream& out, const BifurcationGrid& grid, const std::string& title);

}  // namespace pfcycle::tools
