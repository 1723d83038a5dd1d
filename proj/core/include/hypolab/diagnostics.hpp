#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hypolab/absorption.hpp"
#include "hypolab/field.hpp"

namespace hypolab {

/// One recorded state of a run.
struct DiagnosticsSample {
  double t = 0.0;
  double mass = 0.0;
  double l2_sq = 0.0;
  /// ∫ σ |∂_θ g|² dx dθ at this state.
  double dissipation = 0.0;
  /// L² energy removed by velocity diffusion since the previous sample (zero
  /// for the first sample). Summed over a window it gives ∫ D(g_t) dt with
  /// D := −d/dt ‖g_t‖².
  double dissipated = 0.0;
  /// ∫ σ |g − ⟨g⟩M|² dx dθ.
  double sigma_weighted_defect = 0.0;
  /// ∫_Σ ⟨g⟩² dx.
  double good_set_density_sq = 0.0;
};

/// Rectangle-rule integrals on the uniform periodic grid.
double mass(const DensityField& f);
double l2_norm_sq(const DensityField& f);

/// ⟨g⟩(x) = Σ_θ g Δθ.
SpatialField velocity_average(const DensityField& f);

/// Replaces g by ⟨g⟩M site by site.
DensityField local_equilibrium_projection(const DensityField& f);

/// ∫ σ |∂_θ g|² dx dθ with ∂_θ spectral (the Nyquist mode counted with m², the
/// same symbol the collision step uses).
double dissipation(const DensityField& f, const AbsorptionField& field);

/// Site-wise Poincaré data on S¹: lhs = ∫|g − ⟨g⟩M|² dθ, rhs = ∫|∂_θ g|² dθ.
/// The unweighted inequality lhs ≤ C_P rhs holds with C_P = 1 at every site;
/// the σ-weighted form lhs ≤ (C_P/σ_min) σ rhs is checked only on the good set.
struct MicroCoercivity {
  std::vector<double> lhs;
  std::vector<double> rhs;
  double c_p = 1.0;
  double sigma_min = 0.0;
  /// max over sites of lhs / rhs (sites with rhs = 0 require lhs = 0).
  double max_ratio = 0.0;
  /// Sites where lhs > C_P rhs beyond rounding.
  std::size_t unweighted_violations = 0;
  /// Good-set sites where lhs > (C_P/σ_min) σ rhs beyond rounding.
  std::size_t weighted_violations = 0;
};

MicroCoercivity micro_coercivity_defect(const DensityField& f, const AbsorptionField& field);

/// Evaluates all per-sample functionals with one θ transform of the state.
class DiagnosticsEvaluator {
 public:
  explicit DiagnosticsEvaluator(const AbsorptionField& field);
  ~DiagnosticsEvaluator();
  DiagnosticsEvaluator(DiagnosticsEvaluator&&) noexcept;
  DiagnosticsEvaluator& operator=(DiagnosticsEvaluator&&) noexcept;

  DiagnosticsSample evaluate(double t, const DensityField& f) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Least-squares exponential fit of ‖g_t‖ on a window. c_emp is the smallest
/// prefactor with ‖g_t‖ ≤ c_emp e^{−λ_emp t} on every sample up to t_hi;
/// c_fit is the least-squares intercept, which undershoots when the norm
/// oscillates about its exponential trend.
struct DecayFit {
  double lambda_emp = 0.0;
  double c_emp = 0.0;
  double c_fit = 0.0;
  double t_lo = 0.0;
  double t_hi = 0.0;
  double residual = 0.0;  // RMS of the log-linear fit
  std::size_t samples = 0;
};

inline constexpr double kDecayNormFloor = 1e-13;

/// Fits −log‖g_t‖ over [t_lo, t_hi]; by default the first 20% of the horizon
/// is dropped as transient. Needs at least 10 samples in the window, none of
/// them at or below the 1e-13 floor.
DecayFit fit_decay(std::span<const std::pair<double, double>> series,
                   std::optional<std::pair<double, double>> window = std::nullopt);

/// (t, ‖g_t‖) pairs of a recorded run.
std::vector<std::pair<double, double>> norm_series(std::span<const DiagnosticsSample> samples);

}  // namespace hypolab
