#include "hypolab/field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hypolab {

SpatialField::SpatialField(GridSpec grid) : grid_(grid), values_(grid.sites(), 0.0) {}

SpatialField::SpatialField(GridSpec grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.sites()) {
    throw std::invalid_argument("spatial field size does not match the grid");
  }
}

double SpatialField::sample(double x1, double x2) const noexcept {
  const int n = grid_.n_x();
  const double u = wrap_unit(x1) * n;
  const double w = wrap_unit(x2) * n;
  const int i0 = std::min(static_cast<int>(u), n - 1);
  const int j0 = std::min(static_cast<int>(w), n - 1);
  const double a = u - i0;
  const double b = w - j0;
  const int i1 = (i0 + 1) & (n - 1);
  const int j1 = (j0 + 1) & (n - 1);
  const double* v = values_.data();
  const double f00 = v[static_cast<std::size_t>(i0) * n + j0];
  const double f01 = v[static_cast<std::size_t>(i0) * n + j1];
  const double f10 = v[static_cast<std::size_t>(i1) * n + j0];
  const double f11 = v[static_cast<std::size_t>(i1) * n + j1];
  return (1.0 - a) * ((1.0 - b) * f00 + b * f01) + a * ((1.0 - b) * f10 + b * f11);
}

double SpatialField::sup_norm() const noexcept {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

DensityField::DensityField(GridSpec grid) : grid_(grid), values_(grid.size(), 0.0) {}

DensityField::DensityField(GridSpec grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    throw std::invalid_argument("density field size does not match the grid");
  }
}

bool DensityField::all_finite() const noexcept {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

DensityField& DensityField::operator+=(const DensityField& other) {
  if (!(other.grid_ == grid_)) throw std::invalid_argument("grid mismatch");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

DensityField& DensityField::operator-=(const DensityField& other) {
  if (!(other.grid_ == grid_)) throw std::invalid_argument("grid mismatch");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

DensityField& DensityField::operator*=(double a) noexcept {
  for (double& v : values_) v *= a;
  return *this;
}

DensityField operator+(DensityField a, const DensityField& b) { return a += b; }
DensityField operator-(DensityField a, const DensityField& b) { return a -= b; }
DensityField operator*(double a, DensityField f) { return f *= a; }

double max_abs_difference(const DensityField& a, const DensityField& b) {
  if (!(a.grid() == b.grid())) throw std::invalid_argument("grid mismatch");
  double m = 0.0;
  auto av = a.values();
  auto bv = b.values();
  for (std::size_t i = 0; i < av.size(); ++i) m = std::max(m, std::abs(av[i] - bv[i]));
  return m;
}

SpectralField::SpectralField(GridSpec grid) : grid_(grid), coeffs_(grid.size()) {}

std::complex<double> SpectralField::operator()(int k1, int k2, int m) const noexcept {
  const int n = grid_.n_x();
  return coeffs_[grid_.index(wavenumber_index(k1, n), wavenumber_index(k2, n),
                             wavenumber_index(m, grid_.n_theta()))];
}

}  // namespace hypolab
