#include "hypolab/characteristics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "hypolab/errors.hpp"
#include "hypolab/parallel.hpp"

namespace hypolab {

PhasePoint flow(const PhasePoint& z, double t) noexcept {
  return PhasePoint(z.x1() + t * std::cos(z.theta()), z.x2() + t * std::sin(z.theta()),
                    z.theta());
}

int quadrature_intervals(double t_star, double dt_quad) noexcept {
  return std::max(1, static_cast<int>(std::ceil(t_star / dt_quad - 1e-9)));
}

namespace {

/// Trapezoid sum along x + s v, s = k h, k = 0..n.
double ray_sum(const SpatialField& w, double x1, double x2, double c, double s, double h, int n) {
  double acc = 0.5 * (w.sample(x1, x2) + w.sample(x1 + n * h * c, x2 + n * h * s));
  for (int k = 1; k < n; ++k) acc += w.sample(x1 + k * h * c, x2 + k * h * s);
  return acc * h;
}

}  // namespace

double line_integral(const SpatialField& weight, const PhasePoint& z, double t_star,
                     double dt_quad) {
  if (!(t_star > 0.0) || !(dt_quad > 0.0))
    throw std::invalid_argument("line integral needs t_star > 0 and dt_quad > 0");
  const int n = quadrature_intervals(t_star, dt_quad);
  const double h = t_star / n;
  return ray_sum(weight, z.x1(), z.x2(), std::cos(z.theta()), std::sin(z.theta()), h, n);
}

double line_integral(const AbsorptionField& field, const PhasePoint& z, double t_star,
                     double dt_quad) {
  return line_integral(field.sigma(), z, t_star, dt_quad);
}

GccSampling default_gcc_sampling(const AbsorptionField& field) {
  GccSampling s;
  s.positions = 2 * field.grid().n_x();
  s.angles = 2 * field.grid().n_theta();
  s.dt_quad = field.smoothing_width() > 0.0 ? 0.25 * field.smoothing_width()
                                            : 0.5 * field.grid().dx();
  return s;
}

std::string GccCertificate::to_text() const {
  char buf[1024];
  std::snprintf(buf, sizeof buf,
                "t_star            %.17g\n"
                "c_min             %.17g\n"
                "worst_point       x1=%.17g x2=%.17g theta=%.17g\n"
                "positions         %d\n"
                "angles            %d\n"
                "quadrature_step   %.17g\n"
                "threshold         %.17g\n"
                "trapped_fraction  %.17g\n"
                "status            %s\n",
                t_star, c_min, worst_point.x1(), worst_point.x2(), worst_point.theta(), positions,
                angles, dt_quad, threshold, trapped_fraction,
                uniform_certified() ? "uniform GCC certified at sampling resolution"
                                    : "uniform GCC not certified");
  return buf;
}

GccCertificate certify_gcc(const SpatialField& weight, double t_star, const GccSampling& sampling,
                           double threshold) {
  if (!(t_star > 0.0)) throw std::invalid_argument("t_star must be positive");
  if (sampling.positions < 1 || sampling.angles < 1 || !(sampling.dt_quad > 0.0))
    throw std::invalid_argument("invalid GCC sampling");

  const int P = sampling.positions;
  const int A = sampling.angles;
  const int n = quadrature_intervals(t_star, sampling.dt_quad);
  const double h = t_star / n;
  const std::size_t per_angle = static_cast<std::size_t>(P) * P;
  std::vector<double> integrals(per_angle * A);

  parallel_for(static_cast<std::size_t>(A), [&](std::size_t a) {
    const double theta = kTwoPi * static_cast<double>(a) / A;
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    double* out = integrals.data() + a * per_angle;
    for (int p1 = 0; p1 < P; ++p1)
      for (int p2 = 0; p2 < P; ++p2)
        out[static_cast<std::size_t>(p1) * P + p2] =
            ray_sum(weight, static_cast<double>(p1) / P, static_cast<double>(p2) / P, c, s, h, n);
  });

  std::size_t best = 0;
  std::size_t trapped = 0;
  for (std::size_t i = 0; i < integrals.size(); ++i) {
    if (integrals[i] < integrals[best]) best = i;
    if (integrals[i] <= threshold) ++trapped;
  }
  const std::size_t a = best / per_angle;
  const std::size_t rem = best % per_angle;
  GccCertificate cert;
  cert.t_star = t_star;
  cert.c_min = integrals[best];
  cert.worst_point = PhasePoint(static_cast<double>(rem / P) / P,
                                static_cast<double>(rem % P) / P, kTwoPi * a / A);
  cert.positions = P;
  cert.angles = A;
  cert.dt_quad = sampling.dt_quad;
  cert.threshold = threshold;
  cert.trapped_fraction = static_cast<double>(trapped) / static_cast<double>(integrals.size());
  return cert;
}

GccCertificate certify_gcc(const AbsorptionField& field, double t_star,
                           const GccSampling& sampling) {
  return certify_gcc(field.sigma(), t_star, sampling, 1e-6 * t_star * field.sigma_sup());
}

NormalizedControl normalize_chi(const AbsorptionField& field, double t_star,
                                const GccSampling& sampling, double margin) {
  const double threshold = 1e-6 * t_star * field.chi_sup();
  GccCertificate raw = certify_gcc(field.chi(), t_star, sampling, threshold);
  if (!raw.uniform_certified()) {
    throw NumericalError("χ has no positive line integral along the sampled ray at theta=" +
                         std::to_string(raw.worst_point.theta()) +
                         "; the geometric control condition is not certified");
  }
  const double scale = (1.0 + margin) / raw.c_min;
  NormalizedControl out{field.with_chi_scaled(scale), raw, scale};
  out.chi_certificate.c_min = raw.c_min * scale;
  out.chi_certificate.threshold = raw.threshold * scale;
  return out;
}

}  // namespace hypolab
