#pragma once

#include <cstdint>
#include <string>
#include <variant>

#include "hypolab/field.hpp"

namespace hypolab {

/// 1 + ε cos(2π(k1 x1 + k2 x2)) cos θ.
struct SingleModeData {
  double epsilon = 0.1;
  int k1 = 1;
  int k2 = 0;
};

/// Gaussian in periodic distance around (x1, x2, θ), mean subtracted so the
/// total mass is 0. `width` is the spatial standard deviation and
/// `angular_width` the one in θ.
struct BumpData {
  double x1 = 0.5;
  double x2 = 0.5;
  double theta = 0.0;
  double width = 0.1;
  double angular_width = 0.6;
  double amplitude = 1.0;
};

/// Zero-mass random trigonometric polynomial with |k1|, |k2| ≤ max_k and
/// |m| ≤ max_m; coefficient magnitudes fall off like 1/(1 + |k|² + m²) and the
/// result is scaled to ‖f‖ = amplitude.
struct RandomBandLimitedData {
  std::uint64_t seed = 1;
  int max_k = 4;
  int max_m = 4;
  double amplitude = 1.0;
};

using InitialData = std::variant<SingleModeData, BumpData, RandomBandLimitedData>;

DensityField make_initial_data(const GridSpec& grid, const InitialData& spec);

/// Preset names: "single-mode", "bump", "random".
std::string initial_data_name(const InitialData& spec);

/// Subtracts the global mean so that mass(f) = 0; returns the subtracted value.
double subtract_mean(DensityField& f);

}  // namespace hypolab
