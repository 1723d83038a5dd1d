#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hypolab/absorption.hpp"
#include "hypolab/characteristics.hpp"
#include "hypolab/diagnostics.hpp"

namespace hypolab {

/// Constants of the decay argument. Formula constants are filled by
/// following_constants; the rest are measured on runs and stay empty until then.
struct ConstantsLedger {
  double c_p = 1.0;
  double t_star = 0.0;
  double chi_sup = 0.0;
  double grad_chi_sup = 0.0;
  double sigma_sup = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  std::optional<double> lambda;
  std::optional<double> big_c;
  std::optional<double> big_lambda;
  std::optional<double> delta;
  std::optional<double> c_delta;
  std::optional<double> c_d;
  std::optional<double> c3;
  std::optional<double> c4;
  std::optional<double> c5;
  std::optional<double> c6;

  std::string to_text() const;
};

struct DecayConstants {
  double big_c = 0.0;
  double big_lambda = 0.0;
};

/// C = √(λ/(λ−1)), Λ = log(λ/(λ−1)) / T. Throws std::domain_error for λ ≤ 1.
DecayConstants decay_from_lambda(double lambda, double t_horizon);

struct FollowingConstants {
  double c1 = 0.0;
  double c2 = 0.0;
};

/// C₁ = 4 C_P χ∞ + 4 T* χ∞ + 4 T*³ (∇χ)∞² σ∞, C₂ = 4 χ∞ / 2π.
FollowingConstants following_constants(double c_p, double t_star, double chi_sup,
                                       double grad_chi_sup, double sigma_sup);

/// Ledger with the formula constants of a (normalized) field.
ConstantsLedger make_ledger(const AbsorptionField& field, double t_star);

enum class RowStatus { pass, fail, vacuous, not_applicable, measured };

std::string to_string(RowStatus s);

/// One checked inequality lhs ≤ rhs (or identity lhs = rhs).
struct InequalityRow {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double tolerance = 0.0;
  RowStatus status = RowStatus::measured;
  std::string note;

  double slack() const noexcept { return rhs - lhs; }
};

/// Aligned plain-text table: name, LHS, RHS, slack, status, tolerance, note.
std::string format_rows(std::span<const InequalityRow> rows);

/// Index of the recorded sample at time t (within 1e-9 of a step), or nullopt.
std::optional<std::size_t> sample_at(std::span<const DiagnosticsSample> samples, double t);

/// Energy removed between two recorded samples, i.e. ∫_{t_a}^{t_b} D dt.
double dissipation_integral(std::span<const DiagnosticsSample> samples, std::size_t a,
                            std::size_t b);

/// ‖g_0‖² − ‖g_T‖² against ∫₀^T D dt at the final sample; relative tolerance
/// 1e-6 with an absolute floor at 1e-13 ‖g_0‖².
InequalityRow energy_ledger(std::span<const DiagnosticsSample> samples);

/// Ratio (‖g_0‖² − ‖g_T‖²) / ∫₀^T ∫σ|∂_θ g|² dt, trapezoid in t. Equals 2 up to
/// the splitting and time quadrature errors.
InequalityRow dissipation_factor(std::span<const DiagnosticsSample> samples);

/// Relative mass drift and per-sample monotonicity of ‖g_t‖.
InequalityRow mass_conservation(std::span<const DiagnosticsSample> samples);
InequalityRow norm_monotonicity(std::span<const DiagnosticsSample> samples);

struct LambdaMeasurement {
  double initial_l2_sq = 0.0;
  double dissipation_integral = 0.0;
  double horizon = 0.0;
  bool vacuous = false;
  /// ‖g_init‖² / ∫₀^T D; infinite when vacuous.
  double lambda = 0.0;
};

/// λ_emp over [t0, t0 + T]; vacuous when ∫D < 1e-14 ‖g(t0)‖².
LambdaMeasurement measure_lambda(std::span<const DiagnosticsSample> samples, double t_horizon,
                                 double t0 = 0.0);

/// ‖g_init‖² ≤ λ ∫₀^T D for a given λ (status vacuous when ∫D vanishes).
InequalityRow verify_sufficient(std::span<const DiagnosticsSample> samples, double lambda,
                                double t_horizon);

/// ‖g(t0)‖² ≤ C₁ ∫ D + C₂ ∫∫_Σ ⟨g⟩² over [t0, t0 + T*].
InequalityRow verify_following(std::span<const DiagnosticsSample> samples,
                               const FollowingConstants& constants, double t_star,
                               double t0 = 0.0);

/// verify_following on every window [t_k, t_k + T*] starting at a recorded
/// time; returns the row with the smallest RHS/LHS ratio and the window count
/// in its note.
InequalityRow verify_following_windows(std::span<const DiagnosticsSample> samples,
                                       const FollowingConstants& constants, double t_star);

struct QuantMeasurement {
  double delta = 0.0;
  double density_integral = 0.0;  // ∫₀^{T*} ∫_Σ ⟨g⟩²
  double dissipation_integral = 0.0;
  double norm_integral = 0.0;  // ∫₀^{T*} ‖g‖²
  /// Smallest C_δ ≥ 0 realizing the inequality on this run.
  double c_delta = 0.0;
};

QuantMeasurement verify_quant(std::span<const DiagnosticsSample> samples, double t_star,
                              double delta);
InequalityRow quant_row(const QuantMeasurement& q);

/// Trapezoid rule over the recorded times for one sample member.
double time_integral(std::span<const DiagnosticsSample> samples, std::size_t a, std::size_t b,
                     double DiagnosticsSample::*member);

/// Measured constants of the average comparison step: with g snapshots at
/// the ψ time nodes, A_ψ = ∫ M⟨g⟩ψ = J₁ + J₂ where J₁ = ∫ (M⟨g⟩ − g)ψ and
/// J₂ = ∫ gψ, and ḡ = ∫_{[0,T*]×Σ} ⟨g⟩ / (T* |Σ|).
struct AverageConstants {
  double g_avg = 0.0;
  double psi_avg = 0.0;
  double j1 = 0.0;
  double j2 = 0.0;
  double defect_integral = 0.0;  // ∫∫ σ (M⟨g⟩ − g)²
  double dissipation_integral = 0.0;
  double c4 = 0.0;
  double c5 = 0.0;
  double c6 = 0.0;
};

AverageConstants measure_average_constants(std::span<const DensityField> snapshots,
                                           const AbsorptionField& field, const ControlWeight& psi,
                                           double dissipation_integral);

}  // namespace hypolab
