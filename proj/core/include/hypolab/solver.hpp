#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "hypolab/absorption.hpp"
#include "hypolab/diagnostics.hpp"
#include "hypolab/field.hpp"

namespace hypolab {

struct SolverConfig {
  double dt = 0.01;
  double t_end = 1.0;
  int record_every = 1;
  /// Subtract the global mean once at start so that g has zero mass.
  bool zero_mass = false;

  /// min(0.01, 0.1 / max(1, ‖σ‖_∞)).
  static double default_dt(const AbsorptionField& field);

  void validate() const;
  /// Number of steps; the step is shrunk so that steps · dt_effective = t_end.
  int steps() const;
  double effective_dt() const;
};

/// Split-step propagator for ∂_t f + v·∇_x f = σ ∂²_θ f on the tensor grid.
///
/// Both sub-flows are exact on the grid: transport multiplies the spatial
/// Fourier mode k at angle θ by exp(−2πi dt k·v(θ)) (wavenumber 0 used for the
/// Nyquist index so the map stays real and unitary); collision multiplies the
/// θ-mode m at site x by exp(−σ(x) m² dt).
class SplitStepper {
 public:
  explicit SplitStepper(const GridSpec& grid);
  SplitStepper(const GridSpec& grid, const SpatialField& sigma);
  ~SplitStepper();
  SplitStepper(SplitStepper&&) noexcept;
  SplitStepper& operator=(SplitStepper&&) noexcept;

  const GridSpec& grid() const noexcept;

  void load(const DensityField& f);
  DensityField state() const;

  void transport(double dt);
  /// Returns the L² energy removed, evaluated from the θ spectrum.
  double collision(double dt);
  /// T(dt/2) ∘ C(dt) ∘ T(dt/2); returns the energy removed by C.
  double strang(double dt);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

DensityField step_transport(const DensityField& f, double dt);
DensityField step_collision(const DensityField& f, const AbsorptionField& field, double dt);
DensityField strang_step(const DensityField& f, const AbsorptionField& field, double dt);

/// −v·∇_x g with spectral derivatives (Nyquist wavenumber treated as 0).
DensityField apply_transport_generator(const DensityField& g);
/// ∂²_θ g with the spectral symbol −m².
DensityField apply_velocity_laplacian(const DensityField& g);
/// Spectral ∂/∂x_axis of a spatial field, axis ∈ {1, 2}.
SpatialField spatial_derivative(const SpatialField& f, int axis);

using DiagnosticsHook = std::function<void(int step, double t, const DensityField& g)>;

struct EvolveResult {
  DensityField final_state;
  std::vector<DiagnosticsSample> samples;
  double subtracted_mean = 0.0;
  double dt = 0.0;
  int steps = 0;
};

/// Iterates strang_step from f0 up to config.t_end. Samples are recorded at
/// step 0, every record_every steps, and at the final step; the hook (if any)
/// sees each recorded state. Throws NumericalError with the step index when
/// the state stops being finite.
EvolveResult evolve(const DensityField& f0, const AbsorptionField& field,
                    const SolverConfig& config, const DiagnosticsHook& hook = {});

}  // namespace hypolab
