#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "hypolab/characteristics.hpp"
#include "hypolab/errors.hpp"
#include "hypolab/parallel.hpp"

namespace hypolab {

double ControlWeight::denominator(double t, const PhasePoint& z) const {
  return line_integral(chi_, flow(z, -t), t_star_, dt_quad_);
}

double ControlWeight::evaluate(double t, const PhasePoint& z) const {
  const double num = chi_.sample(z.x1(), z.x2());
  if (num == 0.0) return 0.0;
  return num / denominator(t, z);
}

double ControlWeight::average_along_flow(const PhasePoint& z) const {
  const int n = quadrature_intervals(t_star_, dt_quad_);
  const double h = t_star_ / n;
  double acc = 0.0;
  for (int k = 0; k <= n; ++k) {
    const double t = k * h;
    const double w = (k == 0 || k == n) ? 0.5 : 1.0;
    acc += w * evaluate(t, flow(z, t));
  }
  return acc * h;
}

ControlWeight build_psi(const AbsorptionField& field, double t_star, int n_t, double dt_quad) {
  if (!(t_star > 0.0)) throw std::invalid_argument("t_star must be positive");
  if (n_t < 2) throw std::invalid_argument("ψ tabulation needs at least two time samples");
  if (!(dt_quad > 0.0)) throw std::invalid_argument("dt_quad must be positive");

  const GridSpec& g = field.grid();
  ControlWeight psi(field.chi());
  psi.t_star_ = t_star;
  psi.dt_quad_ = dt_quad;
  psi.n_t_ = n_t;
  psi.values_.assign(static_cast<std::size_t>(n_t) * g.size(), 0.0);

  const int n = g.n_x();
  const int nt = g.n_theta();
  std::vector<double> site_min(g.sites(), std::numeric_limits<double>::infinity());

  parallel_for(g.sites(), [&](std::size_t site) {
    const int i1 = static_cast<int>(site / n);
    const int i2 = static_cast<int>(site % n);
    const double chi = field.chi()(i1, i2);
    if (chi == 0.0) return;
    double local_min = std::numeric_limits<double>::infinity();
    for (int k = 0; k < n_t; ++k) {
      const double t = psi.time(k);
      for (int j = 0; j < nt; ++j) {
        const PhasePoint z(g.x(i1), g.x(i2), g.theta(j));
        const double den = psi.denominator(t, z);
        local_min = std::min(local_min, den);
        psi.values_[static_cast<std::size_t>(k) * g.size() + site * nt + j] = chi / den;
      }
    }
    site_min[site] = local_min;
  });

  double min_den = std::numeric_limits<double>::infinity();
  for (double m : site_min) min_den = std::min(min_den, m);
  psi.min_denominator_ = min_den;
  if (min_den < 0.5) {
    throw NumericalError("ψ denominator dropped to " + std::to_string(min_den) +
                         " < 0.5: certification margin violated");
  }
  return psi;
}

}  // namespace hypolab
