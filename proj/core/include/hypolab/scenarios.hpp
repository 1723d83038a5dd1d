#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "hypolab/absorption.hpp"
#include "hypolab/region.hpp"

namespace hypolab {

/// A named support geometry with the parameters needed to build σ.
struct Scenario {
  std::string name;
  SupportRegion region;
  double smoothing_width = 1.0 / 24.0;
  double amplitude = 1.0;
  double t_star = 2.0;
};

/// "uniform" (σ ≡ 1 on the whole torus), "cross" (two perpendicular bands of
/// width 1/3), "band" (one horizontal band of width 1/3), "two-disks" (disks of
/// radius 0.2 at (0.25, 0.25) and (0.75, 0.75)).
Scenario scenario_preset(std::string_view name);

const std::vector<std::string>& scenario_names();

AbsorptionField build_scenario_field(const GridSpec& grid, const Scenario& scenario);

}  // namespace hypolab
