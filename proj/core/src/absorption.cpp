#include "hypolab/absorption.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <variant>

namespace hypolab {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

double sign_of(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

/// ∇ depth, defined almost everywhere with unit length (zero for the torus).
std::array<double, 2> depth_gradient(const Shape& shape, double x1, double x2) {
  return std::visit(
      Overloaded{
          [](const TorusShape&) { return std::array<double, 2>{0.0, 0.0}; },
          [&](const BandShape& b) {
            if (b.axis == Axis::horizontal)
              return std::array<double, 2>{0.0, -sign_of(periodic_delta(x2, b.center))};
            return std::array<double, 2>{-sign_of(periodic_delta(x1, b.center)), 0.0};
          },
          [](const CrossShape&) { return std::array<double, 2>{0.0, 0.0}; },  // split into atoms
          [&](const DiskShape& d) {
            const double d1 = periodic_delta(x1, d.cx);
            const double d2 = periodic_delta(x2, d.cy);
            const double r = std::hypot(d1, d2);
            if (r == 0.0) return std::array<double, 2>{0.0, 0.0};
            return std::array<double, 2>{-d1 / r, -d2 / r};
          },
          [&](const RectangleShape& r) {
            const double d1 = periodic_delta(x1, r.cx);
            const double d2 = periodic_delta(x2, r.cy);
            if (0.5 * r.width - std::abs(d1) <= 0.5 * r.height - std::abs(d2))
              return std::array<double, 2>{-sign_of(d1), 0.0};
            return std::array<double, 2>{0.0, -sign_of(d2)};
          },
      },
      shape);
}

struct Atom {
  Shape shape;
  double chi_ramp;  // width of the χ ramp; ≤ 0 when the atom carries no χ
};

}  // namespace

double smoothstep(double s) noexcept {
  if (s <= 0.0) return 0.0;
  if (s >= 1.0) return 1.0;
  return s * s * (3.0 - 2.0 * s);
}

double smoothstep_derivative(double s) noexcept {
  if (s <= 0.0 || s >= 1.0) return 0.0;
  return 6.0 * s * (1.0 - s);
}

double AbsorptionField::support_area() const noexcept {
  std::size_t count = 0;
  for (auto m : support_mask_) count += m;
  return static_cast<double>(count) * grid().dx() * grid().dx();
}

AbsorptionField AbsorptionField::with_chi_scaled(double factor) const {
  AbsorptionField out = *this;
  for (double& v : out.chi_.values()) v *= factor;
  out.chi_sup_ *= factor;
  out.grad_chi_sup_ *= factor;
  out.kappa_ *= factor;
  out.chi_scale_ *= factor;
  return out;
}

AbsorptionField build_sigma(const GridSpec& grid, const SupportRegion& region,
                            double smoothing_width, double amplitude) {
  if (!(smoothing_width > 0.0))
    throw std::invalid_argument("smoothing width must be positive");
  if (smoothing_width > 0.5 * region.min_dimension())
    throw std::invalid_argument("smoothing width exceeds half the smallest shape dimension");
  if (!(amplitude > 0.0)) throw std::invalid_argument("amplitude must be positive");

  const double w = smoothing_width;
  std::vector<Atom> atoms;
  for (const auto& component : region.components()) {
    for (auto& a : shape_atoms(component)) {
      const double m = shape_max_depth(a);
      const double ramp = std::isinf(m) ? w : std::min(w, 0.5 * (m - w));
      atoms.push_back({a, ramp});
    }
  }

  AbsorptionField f(grid);
  f.support_ = region;
  f.smoothing_width_ = w;
  f.amplitude_ = amplitude;
  f.certified_ = true;
  f.support_mask_.assign(grid.sites(), 0);
  f.good_mask_.assign(grid.sites(), 0);

  const int n = grid.n_x();
  double grad_sup = 0.0;
  for (int i1 = 0; i1 < n; ++i1) {
    for (int i2 = 0; i2 < n; ++i2) {
      const double x1 = grid.x(i1);
      const double x2 = grid.x(i2);
      double sigma_rest = 1.0;  // Π (1 − S_σ)
      double chi_rest = 1.0;    // Π (1 − S_χ)
      std::vector<double> chi_terms(atoms.size());
      for (std::size_t a = 0; a < atoms.size(); ++a) {
        const double depth = shape_depth(atoms[a].shape, x1, x2);
        sigma_rest *= 1.0 - smoothstep(depth / w);
        chi_terms[a] = atoms[a].chi_ramp > 0.0 ? smoothstep((depth - w) / atoms[a].chi_ramp) : 0.0;
        chi_rest *= 1.0 - chi_terms[a];
      }
      // ∇χ = Σ_a S'_a / ramp_a ∇depth_a Π_{b≠a} (1 − S_b)
      double g1 = 0.0, g2 = 0.0;
      for (std::size_t a = 0; a < atoms.size(); ++a) {
        if (atoms[a].chi_ramp <= 0.0) continue;
        const double depth = shape_depth(atoms[a].shape, x1, x2);
        const double ds = smoothstep_derivative((depth - w) / atoms[a].chi_ramp) / atoms[a].chi_ramp;
        if (ds == 0.0) continue;
        double others = 1.0;
        for (std::size_t b = 0; b < atoms.size(); ++b)
          if (b != a) others *= 1.0 - chi_terms[b];
        auto gd = depth_gradient(atoms[a].shape, x1, x2);
        g1 += ds * others * gd[0];
        g2 += ds * others * gd[1];
      }
      grad_sup = std::max(grad_sup, std::hypot(g1, g2));

      const double sigma = amplitude * (1.0 - sigma_rest);
      f.sigma_(i1, i2) = sigma;
      f.chi_(i1, i2) = 1.0 - chi_rest;
      const std::size_t s = grid.site(i1, i2);
      f.support_mask_[s] = region.contains(x1, x2) ? 1 : 0;
      f.good_mask_[s] = sigma >= 0.5 * amplitude ? 1 : 0;
    }
  }
  f.sigma_sup_ = f.sigma_.sup_norm();
  f.chi_sup_ = f.chi_.sup_norm();
  f.grad_chi_sup_ = grad_sup;
  f.kappa_ = f.chi_sup_ / amplitude;
  return f;
}

AbsorptionField absorption_from_raw(const GridSpec& grid, std::vector<double> sigma_values) {
  if (sigma_values.size() != grid.sites())
    throw std::invalid_argument("raw σ matrix does not match n_x × n_x");
  for (double v : sigma_values) {
    if (!std::isfinite(v) || v < 0.0)
      throw std::invalid_argument("raw σ must be finite and non-negative");
  }
  AbsorptionField f(grid);
  f.sigma_ = SpatialField(grid, sigma_values);
  f.chi_ = SpatialField(grid, std::move(sigma_values));
  f.sigma_sup_ = f.sigma_.sup_norm();
  f.chi_sup_ = f.sigma_sup_;
  f.amplitude_ = f.sigma_sup_;
  f.kappa_ = 1.0;
  f.support_mask_.assign(grid.sites(), 0);
  f.good_mask_.assign(grid.sites(), 0);
  const int n = grid.n_x();
  double grad_sup = 0.0;
  for (int i1 = 0; i1 < n; ++i1) {
    for (int i2 = 0; i2 < n; ++i2) {
      const std::size_t s = grid.site(i1, i2);
      const double v = f.sigma_(i1, i2);
      f.support_mask_[s] = v > 0.0 ? 1 : 0;
      f.good_mask_[s] = (f.amplitude_ > 0.0 && v >= 0.5 * f.amplitude_) ? 1 : 0;
      const double g1 = (f.chi_((i1 + 1) % n, i2) - f.chi_((i1 + n - 1) % n, i2)) * 0.5 * n;
      const double g2 = (f.chi_(i1, (i2 + 1) % n) - f.chi_(i1, (i2 + n - 1) % n)) * 0.5 * n;
      grad_sup = std::max(grad_sup, std::hypot(g1, g2));
    }
  }
  f.grad_chi_sup_ = grad_sup;
  return f;
}

}  // namespace hypolab
