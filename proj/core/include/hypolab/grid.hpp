#pragma once

#include <cstddef>
#include <numbers>

namespace hypolab {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Reduces a coordinate into [0, 1).
double wrap_unit(double x) noexcept;

/// Reduces an angle into [0, 2π).
double wrap_angle(double theta) noexcept;

/// Signed periodic difference a - b reduced into [-1/2, 1/2).
double periodic_delta(double a, double b) noexcept;

/// Tensor grid on 𝕋² × S¹: n_x points per spatial axis, n_theta points on the
/// velocity circle. Both counts are powers of two and at least 8.
class GridSpec {
 public:
  GridSpec(int n_x, int n_theta);

  int n_x() const noexcept { return n_x_; }
  int n_theta() const noexcept { return n_theta_; }

  double dx() const noexcept { return 1.0 / n_x_; }
  double dtheta() const noexcept { return kTwoPi / n_theta_; }

  /// Cell measure dx² dθ of one phase-space grid point.
  double cell_volume() const noexcept { return dx() * dx() * dtheta(); }

  /// Uniform velocity density M = 1/|S¹|.
  static constexpr double local_equilibrium() noexcept { return 1.0 / kTwoPi; }

  std::size_t sites() const noexcept {
    return static_cast<std::size_t>(n_x_) * static_cast<std::size_t>(n_x_);
  }
  std::size_t size() const noexcept {
    return sites() * static_cast<std::size_t>(n_theta_);
  }

  double x(int i) const noexcept { return static_cast<double>(i) / n_x_; }
  double theta(int j) const noexcept { return kTwoPi * j / n_theta_; }

  std::size_t site(int i1, int i2) const noexcept {
    return static_cast<std::size_t>(i1) * n_x_ + static_cast<std::size_t>(i2);
  }
  /// Row-major index with θ fastest: ((i1 * n_x) + i2) * n_theta + j.
  std::size_t index(int i1, int i2, int j) const noexcept {
    return site(i1, i2) * n_theta_ + static_cast<std::size_t>(j);
  }

  friend bool operator==(const GridSpec&, const GridSpec&) = default;

 private:
  int n_x_;
  int n_theta_;
};

/// A point z = (x, θ) of phase space, v = (cos θ, sin θ). Coordinates are kept
/// reduced: x ∈ [0,1)², θ ∈ [0, 2π).
class PhasePoint {
 public:
  PhasePoint() = default;
  PhasePoint(double x1, double x2, double theta) noexcept
      : x1_(wrap_unit(x1)), x2_(wrap_unit(x2)), theta_(wrap_angle(theta)) {}

  double x1() const noexcept { return x1_; }
  double x2() const noexcept { return x2_; }
  double theta() const noexcept { return theta_; }

 private:
  double x1_ = 0.0;
  double x2_ = 0.0;
  double theta_ = 0.0;
};

/// Torus distance between two phase points, max over the three coordinates
/// (θ measured on the circle).
double phase_distance(const PhasePoint& a, const PhasePoint& b) noexcept;

}  // namespace hypolab
