#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "hypolab/field.hpp"
#include "hypolab/region.hpp"

namespace hypolab {

/// C¹ smoothstep: 0 for s ≤ 0, 1 for s ≥ 1, s²(3 − 2s) in between.
double smoothstep(double s) noexcept;
double smoothstep_derivative(double s) noexcept;

/// σ(x) ≥ 0 together with its control companion χ and the support Σ.
///
/// Built from shapes (build_sigma) the field carries certified sup norms and
/// supp χ ⊂ Σ by construction; imported from a raw grid it does not.
class AbsorptionField {
 public:
  const GridSpec& grid() const noexcept { return sigma_.grid(); }
  const SpatialField& sigma() const noexcept { return sigma_; }
  const SpatialField& chi() const noexcept { return chi_; }

  /// Σ as shapes; empty for raw imports.
  const std::optional<SupportRegion>& support() const noexcept { return support_; }
  /// Grid-point membership in Σ (one byte per site).
  const std::vector<std::uint8_t>& support_mask() const noexcept { return support_mask_; }
  /// Sites where σ ≥ σ_min = amplitude/2, the certified good set.
  const std::vector<std::uint8_t>& good_mask() const noexcept { return good_mask_; }

  double smoothing_width() const noexcept { return smoothing_width_; }
  double amplitude() const noexcept { return amplitude_; }
  double sigma_min_good() const noexcept { return 0.5 * amplitude_; }

  double sigma_sup() const noexcept { return sigma_sup_; }
  double chi_sup() const noexcept { return chi_sup_; }
  double grad_chi_sup() const noexcept { return grad_chi_sup_; }
  /// Construction constant with χ ≤ κ σ on the grid.
  double kappa() const noexcept { return kappa_; }
  /// Factor applied to the constructed χ (1 until normalized).
  double chi_scale() const noexcept { return chi_scale_; }
  bool certified() const noexcept { return certified_; }

  /// Measure of Σ on the grid (count of member sites × dx²).
  double support_area() const noexcept;

  /// Copy with χ multiplied by `factor`; all χ norms rescale accordingly.
  AbsorptionField with_chi_scaled(double factor) const;

  friend AbsorptionField build_sigma(const GridSpec&, const SupportRegion&, double, double);
  friend AbsorptionField absorption_from_raw(const GridSpec&, std::vector<double>);

 private:
  explicit AbsorptionField(const GridSpec& grid) : sigma_(grid), chi_(grid) {}

  SpatialField sigma_;
  SpatialField chi_;
  std::optional<SupportRegion> support_;
  std::vector<std::uint8_t> support_mask_;
  std::vector<std::uint8_t> good_mask_;
  double smoothing_width_ = 0.0;
  double amplitude_ = 0.0;
  double sigma_sup_ = 0.0;
  double chi_sup_ = 0.0;
  double grad_chi_sup_ = 0.0;
  double kappa_ = 0.0;
  double chi_scale_ = 1.0;
  bool certified_ = false;
};

/// σ = amplitude · (1 − Π_a (1 − S(depth_a / w))) over the smooth atoms a of
/// Σ, which equals `amplitude` wherever some atom is at depth ≥ w and vanishes
/// outside Σ. χ uses the same union with the ramp shifted inward by w, so
/// χ > 0 only where σ = amplitude.
///
/// Throws std::invalid_argument when w ≤ 0, w exceeds half the smallest shape
/// dimension, or amplitude ≤ 0.
AbsorptionField build_sigma(const GridSpec& grid, const SupportRegion& region,
                            double smoothing_width, double amplitude);

/// Wraps a raw non-negative σ matrix (row-major, n_x × n_x). χ is set to σ,
/// Σ to {σ > 0}; the result carries no smoothness certificate.
AbsorptionField absorption_from_raw(const GridSpec& grid, std::vector<double> sigma_values);

}  // namespace hypolab
