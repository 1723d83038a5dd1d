#pragma once

#include <array>
#include <span>
#include <vector>

#include "hypolab/absorption.hpp"
#include "hypolab/field.hpp"

namespace hypolab {

/// Velocity test functions dual to v₀ = 1, v₁ = cos θ, v₂ = sin θ:
/// φ₀ = 1/2π, φ₁ = cos θ/π, φ₂ = sin θ/π, sampled on the θ grid.
std::array<std::vector<double>, 3> moment_test_functions(const GridSpec& grid);

/// Quadrature of ∫ φ_i v_j dθ on the θ grid; the identity up to rounding.
std::array<std::array<double, 3>, 3> biorthogonality_matrix(const GridSpec& grid);

/// Defect fields of one snapshot, with index 0 the time direction.
///
/// With φ̂_i = 2π φ_i the test functions relative to the equilibrium M:
///   K_i  = σ ∫ (g − ⟨g⟩M) ∂²_θ φ̂_i dθ,
///   J_ij = ∫ (⟨g⟩M − g) v_j φ̂_i dθ,
/// so that ∂_i ⟨g⟩ = K_i + Σ_j ∂_j J_ij along solutions.
struct MomentDecomposition {
  std::array<std::vector<double>, 3> phi;
  std::array<SpatialField, 3> k;
  std::array<std::array<SpatialField, 3>, 3> j;

  /// Σ_i ‖K_i‖² + Σ_ij ‖J_ij‖² in L²(𝕋²).
  double defect_norm_sq() const;
};

MomentDecomposition build_moment_decomposition(const DensityField& g, const AbsorptionField& field);

/// ∂_t g = −v·∇_x g + σ ∂²_θ g evaluated spectrally.
DensityField time_derivative(const DensityField& g, const AbsorptionField& field);

/// Residual of ∂_i⟨g⟩ = K_i + Σ_j ∂_j J_ij with spatial derivatives spectral
/// and the time derivative supplied as ġ (exact generator or a difference
/// quotient of snapshots).
struct MomentIdentityResidual {
  std::array<double, 3> residual{};  // L²(𝕋²) norm per i
  double g_norm = 0.0;               // ‖g‖ in L²(𝕋² × S¹)
  double max_relative() const;
};

MomentIdentityResidual moment_identity_residual(const DensityField& g, const DensityField& g_dot,
                                                const AbsorptionField& field);

/// Smallest C₃ with ∫ (Σ‖K_i‖² + Σ‖J_ij‖²) dt ≤ C₃ ∫ D dt over snapshots at
/// the given times (trapezoid in t).
struct ClaimBound {
  double defect_integral = 0.0;
  double dissipation_integral = 0.0;
  double c3 = 0.0;
  bool vacuous = false;
};

ClaimBound measure_claim_bound(std::span<const DensityField> snapshots,
                               std::span<const double> times, const AbsorptionField& field,
                               double dissipation_integral);

}  // namespace hypolab
