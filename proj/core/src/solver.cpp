#include "hypolab/solver.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <stdexcept>
#include <string>

#include "fftw_handle.hpp"
#include "hypolab/errors.hpp"

namespace hypolab {

namespace {

using cplx = std::complex<double>;

// Wavenumber used by the transport symbol: the Nyquist index has no sign, so it
// is frozen (see the class comment in the header).
int transport_wavenumber(int q, int n) noexcept {
  if (2 * q == n) return 0;
  return signed_wavenumber(q, n);
}

std::size_t spatial_complex_size(const GridSpec& g) {
  return static_cast<std::size_t>(g.n_x()) * (g.n_x() / 2 + 1) * g.n_theta();
}

std::size_t theta_complex_size(const GridSpec& g) {
  return g.sites() * static_cast<std::size_t>(g.n_theta() / 2 + 1);
}

}  // namespace

double SolverConfig::default_dt(const AbsorptionField& field) {
  return std::min(0.01, 0.1 / std::max(1.0, field.sigma_sup()));
}

void SolverConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("solver.dt must be positive");
  if (!(t_end > 0.0) || !std::isfinite(t_end)) throw ConfigError("solver.t_end must be positive");
  if (record_every < 1) throw ConfigError("solver.record_every must be at least 1");
}

int SolverConfig::steps() const {
  validate();
  const double ratio = t_end / dt;
  return std::max(1, static_cast<int>(std::ceil(ratio - 1e-9)));
}

double SolverConfig::effective_dt() const { return t_end / steps(); }

struct SplitStepper::Impl {
  explicit Impl(const GridSpec& g)
      : grid(g),
        state(g.size()),
        scratch(g.size()),
        spatial_modes(spatial_complex_size(g)),
        theta_modes(theta_complex_size(g)),
        spatial(g.n_x(), g.n_theta()),
        theta(g.n_theta(), static_cast<int>(g.sites())) {}

  void build_transport(double dt) {
    if (transport_dt == dt && !transport_symbol.empty()) return;
    const int n = grid.n_x();
    const int nt = grid.n_theta();
    const int half = n / 2 + 1;
    const double norm = 1.0 / (static_cast<double>(n) * n);
    transport_symbol.assign(spatial_complex_size(grid), cplx{});
    std::vector<double> c(nt), s(nt);
    for (int j = 0; j < nt; ++j) {
      c[j] = std::cos(grid.theta(j));
      s[j] = std::sin(grid.theta(j));
    }
    std::size_t idx = 0;
    for (int q1 = 0; q1 < n; ++q1) {
      const double k1 = transport_wavenumber(q1, n);
      for (int q2 = 0; q2 < half; ++q2) {
        const double k2 = transport_wavenumber(q2, n);
        for (int j = 0; j < nt; ++j, ++idx) {
          const double phase = -kTwoPi * dt * (k1 * c[j] + k2 * s[j]);
          transport_symbol[idx] = std::polar(norm, phase);
        }
      }
    }
    transport_dt = dt;
  }

  void build_collision(double dt) {
    if (collision_dt == dt && !collision_symbol.empty()) return;
    const int nt = grid.n_theta();
    const int half = nt / 2 + 1;
    collision_symbol.assign(theta_complex_size(grid), 0.0);
    collision_loss.assign(theta_complex_size(grid), 0.0);
    auto sig = sigma->values();
    for (std::size_t site = 0; site < grid.sites(); ++site) {
      for (int m = 0; m < half; ++m) {
        const double rate = sig[site] * static_cast<double>(m) * m * dt;
        collision_symbol[site * half + m] = std::exp(-rate) / nt;
        // 1 − e^{−2 rate}, the fraction of |mode|² removed.
        collision_loss[site * half + m] = -std::expm1(-2.0 * rate);
      }
    }
    collision_dt = dt;
  }

  GridSpec grid;
  std::optional<SpatialField> sigma;
  detail::FftwBuffer<double> state;
  detail::FftwBuffer<double> scratch;
  detail::FftwBuffer<cplx> spatial_modes;
  detail::FftwBuffer<cplx> theta_modes;
  detail::SpatialTransforms spatial;
  detail::ThetaTransforms theta;
  std::vector<cplx> transport_symbol;
  double transport_dt = -1.0;
  std::vector<double> collision_symbol;
  std::vector<double> collision_loss;
  double collision_dt = -1.0;
};

SplitStepper::SplitStepper(const GridSpec& grid) : impl_(std::make_unique<Impl>(grid)) {}

SplitStepper::SplitStepper(const GridSpec& grid, const SpatialField& sigma)
    : impl_(std::make_unique<Impl>(grid)) {
  if (!(sigma.grid() == grid)) throw std::invalid_argument("σ grid does not match solver grid");
  impl_->sigma = sigma;
}

SplitStepper::~SplitStepper() = default;
SplitStepper::SplitStepper(SplitStepper&&) noexcept = default;
SplitStepper& SplitStepper::operator=(SplitStepper&&) noexcept = default;

const GridSpec& SplitStepper::grid() const noexcept { return impl_->grid; }

void SplitStepper::load(const DensityField& f) {
  if (!(f.grid() == impl_->grid)) throw std::invalid_argument("field grid does not match solver grid");
  std::ranges::copy(f.values(), impl_->state.data());
}

DensityField SplitStepper::state() const {
  const double* p = impl_->state.data();
  return DensityField(impl_->grid, std::vector<double>(p, p + impl_->grid.size()));
}

void SplitStepper::transport(double dt) {
  Impl& m = *impl_;
  m.build_transport(dt);
  m.spatial.forward(m.state.data(), m.spatial_modes.data());
  const std::size_t n = m.spatial_modes.size();
  for (std::size_t i = 0; i < n; ++i) m.spatial_modes[i] *= m.transport_symbol[i];
  m.spatial.inverse(m.spatial_modes.data(), m.state.data());
}

double SplitStepper::collision(double dt) {
  Impl& m = *impl_;
  if (!m.sigma) throw std::logic_error("collision step needs σ");
  m.build_collision(dt);
  m.theta.forward(m.state.data(), m.theta_modes.data());
  const int nt = m.grid.n_theta();
  const int half = nt / 2 + 1;
  double removed = 0.0;
  const std::size_t n = m.theta_modes.size();
  for (std::size_t i = 0; i < n; ++i) {
    const int mode = static_cast<int>(i % half);
    const double weight = (mode == 0 || 2 * mode == nt) ? 1.0 : 2.0;
    removed += weight * std::norm(m.theta_modes[i]) * m.collision_loss[i];
    m.theta_modes[i] *= m.collision_symbol[i];
  }
  m.theta.inverse(m.theta_modes.data(), m.state.data());
  // Parseval for the unnormalized DFT: Σ_j |g_j|² = (1/n) Σ_m |G_m|².
  return removed * m.grid.cell_volume() / nt;
}

double SplitStepper::strang(double dt) {
  transport(0.5 * dt);
  const double removed = collision(dt);
  transport(0.5 * dt);
  return removed;
}

DensityField step_transport(const DensityField& f, double dt) {
  SplitStepper s(f.grid());
  s.load(f);
  s.transport(dt);
  return s.state();
}

DensityField step_collision(const DensityField& f, const AbsorptionField& field, double dt) {
  SplitStepper s(f.grid(), field.sigma());
  s.load(f);
  s.collision(dt);
  return s.state();
}

DensityField strang_step(const DensityField& f, const AbsorptionField& field, double dt) {
  SplitStepper s(f.grid(), field.sigma());
  s.load(f);
  s.strang(dt);
  return s.state();
}

DensityField apply_transport_generator(const DensityField& g) {
  const GridSpec& grid = g.grid();
  const int n = grid.n_x();
  const int nt = grid.n_theta();
  const int half = n / 2 + 1;
  detail::SpatialTransforms t(n, nt);
  detail::FftwBuffer<double> in(grid.size());
  detail::FftwBuffer<cplx> modes(spatial_complex_size(grid));
  std::ranges::copy(g.values(), in.data());
  t.forward(in.data(), modes.data());
  const double norm = 1.0 / (static_cast<double>(n) * n);
  std::size_t idx = 0;
  for (int q1 = 0; q1 < n; ++q1) {
    const double k1 = transport_wavenumber(q1, n);
    for (int q2 = 0; q2 < half; ++q2) {
      const double k2 = transport_wavenumber(q2, n);
      for (int j = 0; j < nt; ++j, ++idx) {
        const double th = grid.theta(j);
        const double freq = kTwoPi * (k1 * std::cos(th) + k2 * std::sin(th));
        modes[idx] *= cplx(0.0, -freq * norm);
      }
    }
  }
  DensityField out(grid);
  t.inverse(modes.data(), in.data());
  std::copy(in.data(), in.data() + grid.size(), out.values().begin());
  return out;
}

DensityField apply_velocity_laplacian(const DensityField& g) {
  const GridSpec& grid = g.grid();
  const int nt = grid.n_theta();
  const int half = nt / 2 + 1;
  detail::ThetaTransforms t(nt, static_cast<int>(grid.sites()));
  detail::FftwBuffer<double> in(grid.size());
  detail::FftwBuffer<cplx> modes(theta_complex_size(grid));
  std::ranges::copy(g.values(), in.data());
  t.forward(in.data(), modes.data());
  for (std::size_t i = 0; i < modes.size(); ++i) {
    const double m = static_cast<double>(i % half);
    modes[i] *= -m * m / nt;
  }
  DensityField out(grid);
  t.inverse(modes.data(), in.data());
  std::copy(in.data(), in.data() + grid.size(), out.values().begin());
  return out;
}

SpatialField spatial_derivative(const SpatialField& f, int axis) {
  if (axis != 1 && axis != 2) throw std::invalid_argument("axis must be 1 or 2");
  const GridSpec& grid = f.grid();
  const int n = grid.n_x();
  const int half = n / 2 + 1;
  detail::SpatialTransforms t(n, 1);
  detail::FftwBuffer<double> in(grid.sites());
  detail::FftwBuffer<cplx> modes(static_cast<std::size_t>(n) * half);
  std::ranges::copy(f.values(), in.data());
  t.forward(in.data(), modes.data());
  const double norm = 1.0 / (static_cast<double>(n) * n);
  for (int q1 = 0; q1 < n; ++q1) {
    for (int q2 = 0; q2 < half; ++q2) {
      const double k = axis == 1 ? transport_wavenumber(q1, n) : transport_wavenumber(q2, n);
      modes[static_cast<std::size_t>(q1) * half + q2] *= cplx(0.0, kTwoPi * k * norm);
    }
  }
  SpatialField out(grid);
  t.inverse(modes.data(), in.data());
  std::copy(in.data(), in.data() + grid.sites(), out.values().begin());
  return out;
}

EvolveResult evolve(const DensityField& f0, const AbsorptionField& field,
                    const SolverConfig& config, const DiagnosticsHook& hook) {
  config.validate();
  if (!(f0.grid() == field.grid())) throw ConfigError("initial data and σ use different grids");
  if (!f0.all_finite()) throw NumericalError("initial data is not finite", 0);

  EvolveResult result{DensityField(f0.grid()), {}, 0.0, config.effective_dt(), config.steps()};
  DensityField start = f0;
  if (config.zero_mass) {
    const double mean = mass(f0) / kTwoPi;  // |𝕋²×S¹| = 2π
    for (double& v : start.values()) v -= mean;
    result.subtracted_mean = mean;
  }

  SplitStepper stepper(f0.grid(), field.sigma());
  stepper.load(start);
  DiagnosticsEvaluator diagnostics(field);

  auto record = [&](int step, const DensityField& g, double removed) {
    const double t = step * result.dt;
    DiagnosticsSample sample = diagnostics.evaluate(t, g);
    sample.dissipated = removed;
    result.samples.push_back(sample);
    if (hook) hook(step, t, g);
  };

  record(0, start, 0.0);
  double removed = 0.0;
  for (int step = 1; step <= result.steps; ++step) {
    const double dropped = stepper.strang(result.dt);
    if (!std::isfinite(dropped)) {
      throw NumericalError("state became non-finite at step " + std::to_string(step), step);
    }
    removed += dropped;
    const bool last = step == result.steps;
    if (step % config.record_every != 0 && !last) continue;
    DensityField g = stepper.state();
    if (!g.all_finite()) {
      throw NumericalError("state became non-finite at step " + std::to_string(step), step);
    }
    record(step, g, removed);
    removed = 0.0;
    if (last) result.final_state = std::move(g);
  }
  return result;
}

}  // namespace hypolab
