#pragma once

#include <complex>
#include <span>
#include <vector>

#include "hypolab/grid.hpp"

namespace hypolab {

/// Real scalar field on the n_x × n_x spatial grid (σ, χ, ⟨g⟩, ...).
class SpatialField {
 public:
  explicit SpatialField(GridSpec grid);
  SpatialField(GridSpec grid, std::vector<double> values);

  const GridSpec& grid() const noexcept { return grid_; }
  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }

  double operator()(int i1, int i2) const noexcept { return values_[grid_.site(i1, i2)]; }
  double& operator()(int i1, int i2) noexcept { return values_[grid_.site(i1, i2)]; }

  /// Periodic bilinear interpolation at an arbitrary point of 𝕋².
  double sample(double x1, double x2) const noexcept;

  double sup_norm() const noexcept;

 private:
  GridSpec grid_;
  std::vector<double> values_;
};

/// Phase-space density g(x, θ) sampled on the tensor grid, θ fastest.
class DensityField {
 public:
  explicit DensityField(GridSpec grid);
  DensityField(GridSpec grid, std::vector<double> values);

  /// Samples a function of (x1, x2, θ) at every grid node.
  template <class Fn>
  static DensityField from_function(GridSpec grid, Fn&& fn) {
    DensityField f(grid);
    for (int i1 = 0; i1 < grid.n_x(); ++i1)
      for (int i2 = 0; i2 < grid.n_x(); ++i2)
        for (int j = 0; j < grid.n_theta(); ++j)
          f.values_[grid.index(i1, i2, j)] = fn(grid.x(i1), grid.x(i2), grid.theta(j));
    return f;
  }

  const GridSpec& grid() const noexcept { return grid_; }
  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }

  double operator()(int i1, int i2, int j) const noexcept {
    return values_[grid_.index(i1, i2, j)];
  }
  double& operator()(int i1, int i2, int j) noexcept { return values_[grid_.index(i1, i2, j)]; }

  /// θ-profile at one spatial site.
  std::span<const double> profile(int i1, int i2) const noexcept {
    return std::span<const double>(values_).subspan(grid_.site(i1, i2) * grid_.n_theta(),
                                                    grid_.n_theta());
  }

  bool all_finite() const noexcept;

  DensityField& operator+=(const DensityField& other);
  DensityField& operator-=(const DensityField& other);
  DensityField& operator*=(double a) noexcept;

 private:
  GridSpec grid_;
  std::vector<double> values_;
};

DensityField operator+(DensityField a, const DensityField& b);
DensityField operator-(DensityField a, const DensityField& b);
DensityField operator*(double a, DensityField f);

/// Largest pointwise difference between two fields on the same grid.
double max_abs_difference(const DensityField& a, const DensityField& b);

/// Complex Fourier coefficients in all three periodic directions, stored with
/// the same (k1, k2, m) ordering as DensityField, FFT index convention
/// (index q ↔ wavenumber q for q < n/2, q − n otherwise).
class SpectralField {
 public:
  explicit SpectralField(GridSpec grid);

  const GridSpec& grid() const noexcept { return grid_; }
  std::span<const std::complex<double>> coefficients() const noexcept { return coeffs_; }
  std::span<std::complex<double>> coefficients() noexcept { return coeffs_; }

  std::complex<double> operator()(int k1, int k2, int m) const noexcept;

 private:
  GridSpec grid_;
  std::vector<std::complex<double>> coeffs_;
};

/// Maps a signed wavenumber to its FFT storage index for length n.
inline int wavenumber_index(int k, int n) noexcept { return k >= 0 ? k : k + n; }

/// Signed wavenumber of FFT storage index q for length n (Nyquist reported as -n/2).
inline int signed_wavenumber(int q, int n) noexcept { return q < n / 2 ? q : q - n; }

}  // namespace hypolab
