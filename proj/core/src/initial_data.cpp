#include "hypolab/initial_data.hpp"

#include <cmath>
#include <complex>
#include <random>
#include <stdexcept>

#include "hypolab/diagnostics.hpp"
#include "hypolab/spectral.hpp"

namespace hypolab {

namespace {

DensityField single_mode(const GridSpec& grid, const SingleModeData& d) {
  return DensityField::from_function(grid, [&](double x1, double x2, double th) {
    return 1.0 + d.epsilon * std::cos(kTwoPi * (d.k1 * x1 + d.k2 * x2)) * std::cos(th);
  });
}

DensityField bump(const GridSpec& grid, const BumpData& d) {
  if (!(d.width > 0.0) || !(d.angular_width > 0.0)) {
    throw std::invalid_argument("bump widths must be positive");
  }
  const double sx = 2.0 * d.width * d.width;
  const double st = 2.0 * d.angular_width * d.angular_width;
  DensityField f = DensityField::from_function(grid, [&](double x1, double x2, double th) {
    const double a = periodic_delta(x1, d.x1);
    const double b = periodic_delta(x2, d.x2);
    const double c = kTwoPi * periodic_delta(th / kTwoPi, d.theta / kTwoPi);
    return d.amplitude * std::exp(-(a * a + b * b) / sx - c * c / st);
  });
  subtract_mean(f);
  return f;
}

DensityField random_band_limited(const GridSpec& grid, const RandomBandLimitedData& d) {
  if (d.max_k < 0 || d.max_m < 0 || 2 * d.max_k >= grid.n_x() || 2 * d.max_m >= grid.n_theta()) {
    throw std::invalid_argument("random data bandwidth must stay below the grid Nyquist modes");
  }
  std::mt19937_64 rng(d.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  SpectralField modes(grid);
  auto c = modes.coefficients();
  const int n = grid.n_x();
  const int nt = grid.n_theta();
  auto at = [&](int k1, int k2, int m) -> std::complex<double>& {
    const std::size_t i = (static_cast<std::size_t>(wavenumber_index(k1, n)) * n +
                           wavenumber_index(k2, n)) * nt + wavenumber_index(m, nt);
    return c[i];
  };
  // Half space m > 0, or m = 0 with (k1, k2) lexicographically positive; the
  // mirrored mode gets the conjugate so the synthesis is real.
  for (int m = 0; m <= d.max_m; ++m) {
    for (int k1 = -d.max_k; k1 <= d.max_k; ++k1) {
      for (int k2 = -d.max_k; k2 <= d.max_k; ++k2) {
        if (m == 0 && (k1 < 0 || (k1 == 0 && k2 <= 0))) continue;
        const double scale = 1.0 / (1.0 + k1 * k1 + k2 * k2 + m * m);
        const std::complex<double> z(scale * normal(rng), scale * normal(rng));
        at(k1, k2, m) = z;
        at(-k1, -k2, -m) = std::conj(z);
      }
    }
  }
  DensityField f = transform_inverse(modes);
  const double norm = std::sqrt(l2_norm_sq(f));
  if (norm > 0.0) {
    for (double& v : f.values()) v *= d.amplitude / norm;
  }
  return f;
}

}  // namespace

DensityField make_initial_data(const GridSpec& grid, const InitialData& spec) {
  return std::visit(
      [&](const auto& d) -> DensityField {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, SingleModeData>) return single_mode(grid, d);
        else if constexpr (std::is_same_v<T, BumpData>) return bump(grid, d);
        else return random_band_limited(grid, d);
      },
      spec);
}

std::string initial_data_name(const InitialData& spec) {
  switch (spec.index()) {
    case 0: return "single-mode";
    case 1: return "bump";
    default: return "random";
  }
}

double subtract_mean(DensityField& f) {
  const double mean = mass(f) / kTwoPi;
  for (double& v : f.values()) v -= mean;
  return mean;
}

}  // namespace hypolab
