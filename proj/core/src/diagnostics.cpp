#include "hypolab/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "fftw_handle.hpp"

namespace hypolab {

namespace {

using cplx = std::complex<double>;

// Per-site spectral sums of one θ profile, in units of Σ_j |·|² over grid nodes.
struct ProfileSums {
  double fluctuation = 0.0;  // Σ_j |g_j − mean|²
  double derivative = 0.0;   // Σ_j |∂_θ g_j|²
};

ProfileSums profile_sums(const cplx* modes, int n_theta) {
  const int half = n_theta / 2 + 1;
  ProfileSums s;
  for (int m = 1; m < half; ++m) {
    const double w = (2 * m == n_theta) ? 1.0 : 2.0;
    const double p = w * std::norm(modes[m]);
    s.fluctuation += p;
    s.derivative += p * static_cast<double>(m) * m;
  }
  s.fluctuation /= n_theta;
  s.derivative /= n_theta;
  return s;
}

void require_same_grid(const DensityField& f, const AbsorptionField& field) {
  if (!(f.grid() == field.grid())) throw std::invalid_argument("field and σ use different grids");
}

// θ spectrum of every site of f, layout [site][m < n_theta/2+1].
std::vector<cplx> theta_spectrum(const DensityField& f) {
  const GridSpec& g = f.grid();
  const int half = g.n_theta() / 2 + 1;
  detail::ThetaTransforms t(g.n_theta(), static_cast<int>(g.sites()));
  detail::FftwBuffer<double> in(g.size());
  detail::FftwBuffer<cplx> out(g.sites() * half);
  std::ranges::copy(f.values(), in.data());
  t.forward(in.data(), out.data());
  return std::vector<cplx>(out.data(), out.data() + out.size());
}

}  // namespace

double mass(const DensityField& f) {
  // Neumaier summation: the drift check is absolute at 1e-14 for mean-free data.
  double s = 0.0, c = 0.0;
  for (double v : f.values()) {
    const double t = s + v;
    c += std::abs(s) >= std::abs(v) ? (s - t) + v : (v - t) + s;
    s = t;
  }
  return (s + c) * f.grid().cell_volume();
}

double l2_norm_sq(const DensityField& f) {
  double s = 0.0;
  for (double v : f.values()) s += v * v;
  return s * f.grid().cell_volume();
}

SpatialField velocity_average(const DensityField& f) {
  const GridSpec& g = f.grid();
  SpatialField out(g);
  auto v = f.values();
  auto o = out.values();
  const std::size_t nt = g.n_theta();
  for (std::size_t site = 0; site < g.sites(); ++site) {
    double s = 0.0;
    for (std::size_t j = 0; j < nt; ++j) s += v[site * nt + j];
    o[site] = s * g.dtheta();
  }
  return out;
}

DensityField local_equilibrium_projection(const DensityField& f) {
  const GridSpec& g = f.grid();
  const SpatialField rho = velocity_average(f);
  DensityField out(g);
  auto o = out.values();
  const std::size_t nt = g.n_theta();
  for (std::size_t site = 0; site < g.sites(); ++site) {
    const double eq = rho.values()[site] * GridSpec::local_equilibrium();
    for (std::size_t j = 0; j < nt; ++j) o[site * nt + j] = eq;
  }
  return out;
}

double dissipation(const DensityField& f, const AbsorptionField& field) {
  require_same_grid(f, field);
  const GridSpec& g = f.grid();
  const int half = g.n_theta() / 2 + 1;
  const auto modes = theta_spectrum(f);
  auto sig = field.sigma().values();
  double s = 0.0;
  for (std::size_t site = 0; site < g.sites(); ++site) {
    if (sig[site] == 0.0) continue;
    s += sig[site] * profile_sums(&modes[site * half], g.n_theta()).derivative;
  }
  return s * g.cell_volume();
}

MicroCoercivity micro_coercivity_defect(const DensityField& f, const AbsorptionField& field) {
  require_same_grid(f, field);
  const GridSpec& g = f.grid();
  const int half = g.n_theta() / 2 + 1;
  const auto modes = theta_spectrum(f);
  auto sig = field.sigma().values();
  const auto& good = field.good_mask();

  MicroCoercivity out;
  out.sigma_min = field.sigma_min_good();
  out.lhs.resize(g.sites());
  out.rhs.resize(g.sites());
  double scale = 0.0;
  for (std::size_t site = 0; site < g.sites(); ++site) {
    const ProfileSums s = profile_sums(&modes[site * half], g.n_theta());
    out.lhs[site] = s.fluctuation * g.dtheta();
    out.rhs[site] = s.derivative * g.dtheta();
    scale = std::max(scale, out.rhs[site]);
  }
  const double slack = 1e-12 * std::max(scale, 1e-300);
  for (std::size_t site = 0; site < g.sites(); ++site) {
    const double lhs = out.lhs[site];
    const double rhs = out.rhs[site];
    if (rhs > slack) out.max_ratio = std::max(out.max_ratio, lhs / rhs);
    if (lhs > out.c_p * rhs + slack) ++out.unweighted_violations;
    if (!good.empty() && good[site] && out.sigma_min > 0.0 &&
        lhs > (out.c_p / out.sigma_min) * sig[site] * rhs + slack) {
      ++out.weighted_violations;
    }
  }
  return out;
}

struct DiagnosticsEvaluator::Impl {
  explicit Impl(const AbsorptionField& f)
      : field(f),
        theta(f.grid().n_theta(), static_cast<int>(f.grid().sites())),
        in(f.grid().size()),
        out(f.grid().sites() * (f.grid().n_theta() / 2 + 1)) {}

  AbsorptionField field;
  detail::ThetaTransforms theta;
  mutable detail::FftwBuffer<double> in;
  mutable detail::FftwBuffer<cplx> out;
};

DiagnosticsEvaluator::DiagnosticsEvaluator(const AbsorptionField& field)
    : impl_(std::make_unique<Impl>(field)) {}
DiagnosticsEvaluator::~DiagnosticsEvaluator() = default;
DiagnosticsEvaluator::DiagnosticsEvaluator(DiagnosticsEvaluator&&) noexcept = default;
DiagnosticsEvaluator& DiagnosticsEvaluator::operator=(DiagnosticsEvaluator&&) noexcept = default;

DiagnosticsSample DiagnosticsEvaluator::evaluate(double t, const DensityField& f) const {
  const Impl& m = *impl_;
  require_same_grid(f, m.field);
  const GridSpec& g = f.grid();
  const int nt = g.n_theta();
  const int half = nt / 2 + 1;
  std::ranges::copy(f.values(), m.in.data());
  m.theta.forward(m.in.data(), m.out.data());

  auto sig = m.field.sigma().values();
  const auto& support = m.field.support_mask();
  const double area = g.dx() * g.dx();
  DiagnosticsSample s;
  s.t = t;
  double mass_sum = 0.0, l2 = 0.0, diss = 0.0, defect = 0.0, density = 0.0;
  for (std::size_t site = 0; site < g.sites(); ++site) {
    const cplx* modes = m.out.data() + site * half;
    const ProfileSums ps = profile_sums(modes, nt);
    const double zero = modes[0].real();  // Σ_j g_j
    mass_sum += zero;
    l2 += ps.fluctuation + zero * zero / nt;
    diss += sig[site] * ps.derivative;
    defect += sig[site] * ps.fluctuation;
    if (support[site]) {
      const double rho = zero * g.dtheta();
      density += rho * rho;
    }
  }
  s.mass = mass_sum * g.cell_volume();
  s.l2_sq = l2 * g.cell_volume();
  s.dissipation = diss * g.cell_volume();
  s.sigma_weighted_defect = defect * g.cell_volume();
  s.good_set_density_sq = density * area;
  return s;
}

DecayFit fit_decay(std::span<const std::pair<double, double>> series,
                   std::optional<std::pair<double, double>> window) {
  if (series.empty()) throw std::invalid_argument("decay fit needs samples");
  double lo, hi;
  if (window) {
    std::tie(lo, hi) = *window;
  } else {
    const double t0 = series.front().first;
    const double t1 = series.back().first;
    lo = t0 + 0.2 * (t1 - t0);
    hi = t1;
  }
  if (!(hi > lo)) throw std::invalid_argument("decay fit window is empty");

  std::vector<std::pair<double, double>> pts;
  for (const auto& [t, norm] : series) {
    if (t < lo - 1e-12 || t > hi + 1e-12) continue;
    if (!(norm > kDecayNormFloor)) {
      throw std::invalid_argument("norm reaches the 1e-13 floor inside the fit window");
    }
    pts.emplace_back(t, std::log(norm));
  }
  if (pts.size() < 10) throw std::invalid_argument("decay fit needs at least 10 samples in the window");

  const double n = static_cast<double>(pts.size());
  double st = 0.0, sy = 0.0;
  for (const auto& [t, y] : pts) {
    st += t;
    sy += y;
  }
  const double tm = st / n, ym = sy / n;
  double stt = 0.0, sty = 0.0;
  for (const auto& [t, y] : pts) {
    stt += (t - tm) * (t - tm);
    sty += (t - tm) * (y - ym);
  }
  const double slope = sty / stt;
  const double intercept = ym - slope * tm;
  double ss = 0.0;
  for (const auto& [t, y] : pts) {
    const double r = y - (intercept + slope * t);
    ss += r * r;
  }
  DecayFit fit;
  fit.lambda_emp = -slope;
  fit.c_fit = std::exp(intercept);
  double log_c = intercept;
  for (const auto& [t, norm] : series) {
    if (t > hi + 1e-12 || !(norm > 0.0)) continue;
    log_c = std::max(log_c, std::log(norm) - slope * t);
  }
  fit.c_emp = std::exp(log_c);
  fit.t_lo = lo;
  fit.t_hi = hi;
  fit.residual = std::sqrt(ss / n);
  fit.samples = pts.size();
  return fit;
}

std::vector<std::pair<double, double>> norm_series(std::span<const DiagnosticsSample> samples) {
  std::vector<std::pair<double, double>> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.emplace_back(s.t, std::sqrt(std::max(0.0, s.l2_sq)));
  return out;
}

}  // namespace hypolab
