#include "hypolab/scenarios.hpp"

#include "hypolab/errors.hpp"

namespace hypolab {

Scenario scenario_preset(std::string_view name) {
  if (name == "uniform") return {"uniform", SupportRegion({TorusShape{}})};
  if (name == "cross") {
    return {"cross", SupportRegion({CrossShape{0.5, 0.5, 1.0 / 3.0}})};
  }
  if (name == "band") {
    return {"band", SupportRegion({BandShape{Axis::horizontal, 0.5, 1.0 / 3.0}})};
  }
  if (name == "two-disks") {
    return {"two-disks", SupportRegion({DiskShape{0.25, 0.25, 0.2}, DiskShape{0.75, 0.75, 0.2}})};
  }
  throw ConfigError("unknown scenario preset '" + std::string(name) + "'");
}

const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names{"uniform", "cross", "band", "two-disks"};
  return names;
}

AbsorptionField build_scenario_field(const GridSpec& grid, const Scenario& scenario) {
  return build_sigma(grid, scenario.region, scenario.smoothing_width, scenario.amplitude);
}

}  // namespace hypolab
