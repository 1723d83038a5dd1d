#pragma once

#include "hypolab/field.hpp"

namespace hypolab {

/// Normalized forward DFT in (x1, x2, θ): ĉ(k) = N⁻¹ Σ f e^{-2πi k·n/N}, so a
/// constant field maps to its value in the zero mode.
SpectralField transform_forward(const DensityField& f);

/// Inverse of transform_forward; returns the real part of the synthesis.
DensityField transform_inverse(const SpectralField& coefficients);

}  // namespace hypolab
