#include "hypolab/grid.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

namespace hypolab {

double wrap_unit(double x) noexcept {
  double r = x - std::floor(x);
  // floor can round a tiny negative value up to exactly 1.
  return r >= 1.0 ? 0.0 : r;
}

double wrap_angle(double theta) noexcept {
  double r = theta - kTwoPi * std::floor(theta / kTwoPi);
  if (r >= kTwoPi || r < 0.0) r = 0.0;
  return r;
}

double periodic_delta(double a, double b) noexcept {
  double d = a - b;
  return d - std::floor(d + 0.5);
}

GridSpec::GridSpec(int n_x, int n_theta) : n_x_(n_x), n_theta_(n_theta) {
  auto check = [](int n, const char* name) {
    if (n < 8 || !std::has_single_bit(static_cast<unsigned>(n))) {
      throw std::invalid_argument(std::string(name) +
                                  " must be a power of two >= 8, got " +
                                  std::to_string(n));
    }
  };
  check(n_x, "n_x");
  check(n_theta, "n_theta");
}

double phase_distance(const PhasePoint& a, const PhasePoint& b) noexcept {
  double d1 = std::abs(periodic_delta(a.x1(), b.x1()));
  double d2 = std::abs(periodic_delta(a.x2(), b.x2()));
  double dt = std::abs(periodic_delta(a.theta() / kTwoPi, b.theta() / kTwoPi)) * kTwoPi;
  return std::max({d1, d2, dt});
}

}  // namespace hypolab
