#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hypolab/absorption.hpp"
#include "hypolab/field.hpp"
#include "hypolab/grid.hpp"
#include "hypolab/region.hpp"

namespace hypolab {

/// Free-transport characteristic Z_t(x, θ) = (x + t(cos θ, sin θ) mod 1, θ).
PhasePoint flow(const PhasePoint& z, double t) noexcept;

/// Number of trapezoid intervals used for a ray of length t_star.
int quadrature_intervals(double t_star, double dt_quad) noexcept;

/// Composite trapezoid quadrature of a gridded weight along the ray from z
/// over [0, t_star], bilinearly interpolated.
double line_integral(const SpatialField& weight, const PhasePoint& z, double t_star,
                     double dt_quad);

/// line_integral of σ.
double line_integral(const AbsorptionField& field, const PhasePoint& z, double t_star,
                     double dt_quad);

/// Ray sampling for GCC certification: positions on a uniform per-axis lattice
/// of 𝕋², angles uniform on [0, 2π).
struct GccSampling {
  int positions = 128;
  int angles = 64;
  double dt_quad = 0.01;
};

/// Default sampling: two positions per grid cell, two angles per velocity
/// node, and a quadrature step of a quarter of the smoothing width (or half a
/// grid cell for raw fields).
GccSampling default_gcc_sampling(const AbsorptionField& field);

/// Result of sampled GCC checking. Certification holds only at the recorded
/// resolution; the trapped fraction is the share of sampled rays whose
/// integral does not exceed the threshold.
struct GccCertificate {
  double t_star = 0.0;
  double c_min = 0.0;
  PhasePoint worst_point;
  int positions = 0;
  int angles = 0;
  double dt_quad = 0.0;
  double threshold = 0.0;
  double trapped_fraction = 0.0;

  bool uniform_certified() const noexcept { return c_min > threshold; }
  std::string to_text() const;
};

/// Minimizes the line integral of `weight` over the sampling lattice. Ties go
/// to the smallest sample index in (angle, x1, x2) order.
GccCertificate certify_gcc(const SpatialField& weight, double t_star, const GccSampling& sampling,
                           double threshold);

/// certify_gcc of σ with threshold 1e-6·T*·‖σ‖_∞.
GccCertificate certify_gcc(const AbsorptionField& field, double t_star,
                           const GccSampling& sampling);

struct NormalizedControl {
  AbsorptionField field;         // χ rescaled
  GccCertificate chi_certificate;  // certificate of the rescaled χ
  double scale = 1.0;
};

/// Rescales χ so that its sampled minimal line integral equals 1 + margin.
/// Throws NumericalError when χ has no positive sampled line integral.
NormalizedControl normalize_chi(const AbsorptionField& field, double t_star,
                                const GccSampling& sampling, double margin = 1e-3);

/// ψ_t(z) = χ(z) / ∫₀^{T*} χ(Z_{s−t}(z)) ds, tabulated on n_t uniform times of
/// [0, T*] × the phase-space grid, with per-query evaluation for spot checks.
class ControlWeight {
 public:
  const GridSpec& grid() const noexcept { return chi_.grid(); }
  double t_star() const noexcept { return t_star_; }
  int n_t() const noexcept { return n_t_; }
  double dt_quad() const noexcept { return dt_quad_; }
  double time(int k) const noexcept { return t_star_ * k / (n_t_ - 1); }

  /// Tabulated ψ at time index k, ordered like DensityField.
  std::span<const double> slice(int k) const noexcept {
    return std::span<const double>(values_).subspan(static_cast<std::size_t>(k) * grid().size(),
                                                    grid().size());
  }
  std::span<const double> values() const noexcept { return values_; }

  /// Smallest denominator met while tabulating (over sites where χ > 0).
  double min_denominator() const noexcept { return min_denominator_; }

  double denominator(double t, const PhasePoint& z) const;
  double evaluate(double t, const PhasePoint& z) const;

  /// Trapezoid quadrature of t ↦ ψ_t(Z_t(z)) on the same nodes as the
  /// denominator; equals 1 up to rounding.
  double average_along_flow(const PhasePoint& z) const;

  friend ControlWeight build_psi(const AbsorptionField&, double, int, double);

 private:
  explicit ControlWeight(SpatialField chi) : chi_(std::move(chi)) {}

  SpatialField chi_;
  double t_star_ = 0.0;
  double dt_quad_ = 0.0;
  int n_t_ = 0;
  double min_denominator_ = 0.0;
  std::vector<double> values_;
};

/// Tabulates ψ from the (normalized) χ of `field`. Throws NumericalError when
/// a denominator falls below 0.5.
ControlWeight build_psi(const AbsorptionField& field, double t_star, int n_t, double dt_quad);

struct ReachabilitySampling {
  int points_per_axis = 48;
  int angles = 64;
  double dt_march = 1e-3;
};

/// Flow connectivity between the components of Σ.
struct ReachabilityReport {
  std::size_t components = 0;
  double t_star = 0.0;
  std::vector<std::uint8_t> reachable;  // k × k, row i = start component
  std::vector<double> first_hit;        // smallest sampled entry time, +inf if none
  std::optional<double> min_irreducible_t_star;

  bool at(std::size_t i, std::size_t j) const { return reachable[i * components + j] != 0; }
  bool irreducible() const;
};

ReachabilityReport component_reachability(const SupportRegion& region, double t_star,
                                          const ReachabilitySampling& sampling = {});

}  // namespace hypolab
