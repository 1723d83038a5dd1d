#include "hypolab/moments.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "hypolab/diagnostics.hpp"
#include "hypolab/solver.hpp"

namespace hypolab {

namespace {

double spatial_norm_sq(const SpatialField& f) {
  double s = 0.0;
  for (double v : f.values()) s += v * v;
  return s * f.grid().dx() * f.grid().dx();
}

// v_j(θ) for j = 0, 1, 2.
double velocity_component(int j, double theta) {
  switch (j) {
    case 0: return 1.0;
    case 1: return std::cos(theta);
    default: return std::sin(theta);
  }
}

// Eigenvalue of ∂²_θ on φ_i: 0 for the constant, −1 for the first harmonics.
double laplacian_eigenvalue(int i) { return i == 0 ? 0.0 : -1.0; }

}  // namespace

std::array<std::vector<double>, 3> moment_test_functions(const GridSpec& grid) {
  std::array<std::vector<double>, 3> phi;
  for (auto& p : phi) p.resize(grid.n_theta());
  for (int j = 0; j < grid.n_theta(); ++j) {
    const double th = grid.theta(j);
    phi[0][j] = 1.0 / kTwoPi;
    phi[1][j] = std::cos(th) / kPi;
    phi[2][j] = std::sin(th) / kPi;
  }
  return phi;
}

std::array<std::array<double, 3>, 3> biorthogonality_matrix(const GridSpec& grid) {
  const auto phi = moment_test_functions(grid);
  std::array<std::array<double, 3>, 3> m{};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      double s = 0.0;
      for (int q = 0; q < grid.n_theta(); ++q) s += phi[i][q] * velocity_component(j, grid.theta(q));
      m[i][j] = s * grid.dtheta();
    }
  }
  return m;
}

double MomentDecomposition::defect_norm_sq() const {
  double s = 0.0;
  for (const auto& f : k) s += spatial_norm_sq(f);
  for (const auto& row : j)
    for (const auto& f : row) s += spatial_norm_sq(f);
  return s;
}

MomentDecomposition build_moment_decomposition(const DensityField& g, const AbsorptionField& field) {
  if (!(g.grid() == field.grid())) throw std::invalid_argument("field and σ use different grids");
  const GridSpec& grid = g.grid();
  const int nt = grid.n_theta();
  const auto phi = moment_test_functions(grid);
  auto make = [&] { return SpatialField(grid); };
  MomentDecomposition d{phi,
                        {make(), make(), make()},
                        {{{make(), make(), make()}, {make(), make(), make()}, {make(), make(), make()}}}};

  // Weights φ̂_i v_j on the θ grid.
  std::array<std::array<std::vector<double>, 3>, 3> weight;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      weight[i][j].resize(nt);
      for (int q = 0; q < nt; ++q)
        weight[i][j][q] = kTwoPi * phi[i][q] * velocity_component(j, grid.theta(q));
    }

  auto v = g.values();
  auto sig = field.sigma().values();
  const double m_eq = GridSpec::local_equilibrium();
  for (std::size_t site = 0; site < grid.sites(); ++site) {
    const double* p = &v[site * nt];
    double rho = 0.0;
    for (int q = 0; q < nt; ++q) rho += p[q];
    rho *= grid.dtheta();
    for (int i = 0; i < 3; ++i) {
      // ∂²_θ φ̂_i = λ_i φ̂_i for these harmonics.
      double kk = 0.0;
      for (int q = 0; q < nt; ++q) kk += (p[q] - rho * m_eq) * kTwoPi * phi[i][q];
      d.k[i].values()[site] = sig[site] * laplacian_eigenvalue(i) * kk * grid.dtheta();
      for (int j = 0; j < 3; ++j) {
        double jj = 0.0;
        for (int q = 0; q < nt; ++q) jj += (rho * m_eq - p[q]) * weight[i][j][q];
        d.j[i][j].values()[site] = jj * grid.dtheta();
      }
    }
  }
  return d;
}

DensityField time_derivative(const DensityField& g, const AbsorptionField& field) {
  DensityField out = apply_transport_generator(g);
  const DensityField lap = apply_velocity_laplacian(g);
  const GridSpec& grid = g.grid();
  const std::size_t nt = grid.n_theta();
  auto sig = field.sigma().values();
  auto o = out.values();
  auto l = lap.values();
  for (std::size_t site = 0; site < grid.sites(); ++site)
    for (std::size_t q = 0; q < nt; ++q) o[site * nt + q] += sig[site] * l[site * nt + q];
  return out;
}

double MomentIdentityResidual::max_relative() const {
  double r = 0.0;
  for (double x : residual) r = std::max(r, x);
  return g_norm > 0.0 ? r / g_norm : r;
}

MomentIdentityResidual moment_identity_residual(const DensityField& g, const DensityField& g_dot,
                                                const AbsorptionField& field) {
  const MomentDecomposition d = build_moment_decomposition(g, field);
  const MomentDecomposition dd = build_moment_decomposition(g_dot, field);
  const SpatialField rho = velocity_average(g);
  const SpatialField rho_dot = velocity_average(g_dot);
  const std::array<SpatialField, 3> grad_rho{rho_dot, spatial_derivative(rho, 1),
                                             spatial_derivative(rho, 2)};
  MomentIdentityResidual out;
  out.g_norm = std::sqrt(l2_norm_sq(g));
  const GridSpec& grid = g.grid();
  for (int i = 0; i < 3; ++i) {
    SpatialField res = grad_rho[i];
    const SpatialField dj1 = spatial_derivative(d.j[i][1], 1);
    const SpatialField dj2 = spatial_derivative(d.j[i][2], 2);
    auto r = res.values();
    for (std::size_t s = 0; s < grid.sites(); ++s) {
      r[s] -= d.k[i].values()[s] + dd.j[i][0].values()[s] + dj1.values()[s] + dj2.values()[s];
    }
    out.residual[i] = std::sqrt(spatial_norm_sq(res));
  }
  return out;
}

ClaimBound measure_claim_bound(std::span<const DensityField> snapshots,
                               std::span<const double> times, const AbsorptionField& field,
                               double dissipation_integral) {
  if (snapshots.size() != times.size() || snapshots.size() < 2) {
    throw std::invalid_argument("claim bound needs at least two timed snapshots");
  }
  std::vector<double> norms(snapshots.size());
  for (std::size_t i = 0; i < snapshots.size(); ++i) {
    norms[i] = build_moment_decomposition(snapshots[i], field).defect_norm_sq();
  }
  ClaimBound c;
  for (std::size_t i = 0; i + 1 < norms.size(); ++i) {
    c.defect_integral += 0.5 * (norms[i] + norms[i + 1]) * (times[i + 1] - times[i]);
  }
  c.dissipation_integral = dissipation_integral;
  c.vacuous = !(dissipation_integral > 0.0);
  c.c3 = c.vacuous ? std::numeric_limits<double>::infinity()
                   : c.defect_integral / dissipation_integral;
  return c;
}

}  // namespace hypolab
