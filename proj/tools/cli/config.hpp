#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hypolab/certificate.hpp"
#include "hypolab/characteristics.hpp"
#include "hypolab/grid.hpp"
#include "hypolab/initial_data.hpp"
#include "hypolab/scenarios.hpp"
#include "hypolab/solver.hpp"

namespace hypolab::cli {

enum class InitialKind { single_mode, bump, random };

struct BogovskiiConfig {
  std::string domain = "disk";  // disk | square | rectangle | l-shape
  int cells = 64;
  double radius = 1.0;  // disk
  double width = 1.0;   // rectangle, square and L side
  double height = 1.0;  // rectangle
  std::string datum = "manufactured";  // manufactured | zero | random
  int members = 8;                     // random ensemble size for the C_D estimate
};

/// Everything a run needs; rebuilt bit-for-bit from its own echo.
struct RunConfig {
  Scenario scenario = scenario_preset("cross");
  std::string scenario_preset_name = "cross";  // "custom" when shapes are explicit
  std::optional<std::filesystem::path> sigma_raw;

  int n_x = 64;
  int n_theta = 32;

  std::optional<double> dt;  // default_dt(σ) when absent
  double t_end = 10.0;
  int record_every = 1;
  bool zero_mass = true;

  InitialKind initial_kind = InitialKind::random;
  SingleModeData single_mode{};
  BumpData bump{};
  int random_max_k = 4;
  int random_max_m = 4;

  std::uint64_t seed = 1;

  std::vector<std::string> verifications{"energy", "mass", "monotone", "sufficient",
                                         "following", "quant", "claim"};
  std::optional<double> verify_lambda;
  double verify_delta = 0.5;

  // Each unset entry falls back to default_gcc_sampling(σ).
  std::optional<int> gcc_positions;
  std::optional<int> gcc_angles;
  std::optional<double> gcc_dt_quad;

  CertificateConfig certificate{};
  BogovskiiConfig bogovskii{};

  std::filesystem::path output_dir = "out";
  int threads = 1;

  GridSpec grid() const { return GridSpec(n_x, n_theta); }
  /// Bump and random data share initial.amplitude (kept in bump.amplitude).
  InitialData initial_data() const;
  GccSampling gcc_sampling(const AbsorptionField& field) const;
  /// σ from the raw import when given, otherwise from the scenario shapes.
  AbsorptionField build_field() const;
};

/// Parses `section.key = value` lines; '#' starts a comment. Unknown keys,
/// malformed values and unknown presets throw ConfigError.
RunConfig parse_config(std::string_view text);

/// Reads and parses a config file; IoError when it cannot be read.
RunConfig load_config(const std::filesystem::path& path);

/// Canonical listing of every key; parse_config(echo(c)) reproduces c.
std::string echo(const RunConfig& config);

/// Names accepted by verify.inequalities.
const std::vector<std::string>& verification_names();

}  // namespace hypolab::cli
