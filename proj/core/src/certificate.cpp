#include "hypolab/certificate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "hypolab/parallel.hpp"

namespace hypolab {

namespace {

// Separate streams for ensemble and held-out data so that neither overlaps.
constexpr std::uint64_t kHeldOutStream = 0x9e3779b97f4a7c15ULL;

RandomBandLimitedData random_member(const CertificateConfig& c, std::uint64_t index,
                                    bool held_out) {
  RandomBandLimitedData d;
  d.seed = c.seed * 1000003ULL + index + (held_out ? kHeldOutStream : 0);
  d.max_k = c.max_k;
  d.max_m = c.max_m;
  return d;
}

double max_window_lambda(const EvolveResult& run, double t_star, int windows) {
  double worst = 0.0;
  for (int w = 0; w < windows; ++w) {
    const auto m = measure_lambda(run.samples, t_star, w * t_star);
    worst = std::max(worst, m.lambda);
  }
  return worst;
}

}  // namespace

std::string DecayCertificate::to_text() const {
  std::ostringstream os;
  char buf[160];
  os << "decay certificate\n";
  std::snprintf(buf, sizeof buf, "  %-18s %s\n", "status", issued ? "issued" : "not issued");
  os << buf;
  if (!reason.empty()) {
    std::snprintf(buf, sizeof buf, "  %-18s ", "reason");
    os << buf << reason << '\n';
  }
  auto line = [&](const char* name, double v) {
    std::snprintf(buf, sizeof buf, "  %-18s %.6e\n", name, v);
    os << buf;
  };
  line("t_star", t_star);
  line("gcc c_min", gcc.c_min);
  std::snprintf(buf, sizeof buf, "  %-18s %d\n", "ensemble size", ensemble_size);
  os << buf;
  for (std::size_t i = 0; i < member_lambdas.size(); ++i) {
    std::snprintf(buf, sizeof buf, "  lambda[%02zu]         %.6e\n", i, member_lambdas[i]);
    os << buf;
  }
  line("lambda_ens", lambda_ens);
  if (issued) {
    line("C", constants.big_c);
    line("Lambda", constants.big_lambda);
    std::snprintf(buf, sizeof buf, "  %-18s %d\n", "held-out runs", held_out);
    os << buf;
    line("held-out margin", held_out_margin);
    line("energy rate", energy_rate);
    line("margin at rate", held_out_margin_energy_rate);
    std::snprintf(buf, sizeof buf, "  %-18s %s\n", "held-out bound", held_out_pass ? "pass" : "FAIL");
    os << buf;
  }
  return os.str();
}

DecayCertificate end_to_end_certificate(const AbsorptionField& field, double t_star,
                                        const CertificateConfig& config,
                                        const GccSampling& sampling) {
  DecayCertificate cert;
  cert.t_star = t_star;
  cert.gcc = certify_gcc(field, t_star, sampling);
  if (!cert.gcc.uniform_certified()) {
    cert.reason = "uniform GCC not certified (c_min " + std::to_string(cert.gcc.c_min) + ")";
    return cert;
  }
  const GridSpec& grid = field.grid();

  std::vector<InitialData> ensemble;
  for (int i = 0; i < config.ensemble_size; ++i) {
    ensemble.emplace_back(random_member(config, static_cast<std::uint64_t>(i), false));
  }
  if (config.worst_ray_bump) {
    const PhasePoint& z = cert.gcc.worst_point;
    ensemble.emplace_back(BumpData{z.x1(), z.x2(), z.theta(), 0.1, 0.3, 1.0});
  }

  SolverConfig sc;
  sc.dt = config.dt;
  sc.record_every = config.record_every;
  sc.zero_mass = true;

  sc.t_end = config.windows * t_star;
  cert.member_lambdas.assign(ensemble.size(), 0.0);
  parallel_for(ensemble.size(), [&](std::size_t i) {
    const EvolveResult run = evolve(make_initial_data(grid, ensemble[i]), field, sc);
    cert.member_lambdas[i] = max_window_lambda(run, t_star, config.windows);
  });
  cert.ensemble_size = static_cast<int>(ensemble.size());
  cert.lambda_ens = *std::ranges::max_element(cert.member_lambdas);
  if (!(cert.lambda_ens > 1.0) || !std::isfinite(cert.lambda_ens)) {
    cert.reason = "ensemble lambda not in (1, inf)";
    return cert;
  }
  cert.constants = decay_from_lambda(cert.lambda_ens, t_star);
  cert.issued = true;

  sc.t_end = config.held_out_windows * t_star;
  cert.held_out = config.held_out;
  // ‖g_T‖² ≤ (1 − 1/λ)‖g_0‖² per window gives the norm rate log(λ/(λ−1))/(2T).
  cert.energy_rate = std::log(cert.lambda_ens / (cert.lambda_ens - 1.0)) / (2.0 * t_star);
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> margins(static_cast<std::size_t>(config.held_out), inf);
  std::vector<double> energy_margins(margins.size(), inf);
  parallel_for(margins.size(), [&](std::size_t i) {
    const auto data = random_member(config, i, true);
    const EvolveResult run = evolve(make_initial_data(grid, data), field, sc);
    const double n0 = std::sqrt(run.samples.front().l2_sq);
    for (const auto& s : run.samples) {
      const double n = std::sqrt(s.l2_sq);
      const double bound = cert.constants.big_c * std::exp(-cert.constants.big_lambda * s.t) * n0;
      const double energy_bound = cert.constants.big_c * std::exp(-cert.energy_rate * s.t) * n0;
      margins[i] = std::min(margins[i], 1.0 - n / bound);
      energy_margins[i] = std::min(energy_margins[i], 1.0 - n / energy_bound);
    }
  });
  cert.held_out_margin = margins.empty() ? inf : *std::ranges::min_element(margins);
  cert.held_out_margin_energy_rate =
      energy_margins.empty() ? inf : *std::ranges::min_element(energy_margins);
  cert.held_out_pass = cert.held_out_margin >= 0.0;
  if (!cert.held_out_pass) {
    cert.reason = cert.held_out_margin_energy_rate >= 0.0
                      ? "held-out run exceeds C e^{-Lambda t} |g0| but stays below C e^{-rate t} |g0| "
                        "at the rate implied by the energy identity"
                      : "held-out run exceeds C e^{-Lambda t} |g0| at both rates: ensemble under-sampled";
  }
  return cert;
}

bool ConcentrationStudy::strictly_decreasing() const {
  for (std::size_t i = 1; i < fits.size(); ++i) {
    if (!(fits[i].lambda_emp < fits[i - 1].lambda_emp)) return false;
  }
  return !fits.empty();
}

ConcentrationStudy concentration_study(const AbsorptionField& field, const PhasePoint& center,
                                       const std::vector<double>& widths, double t_lo, double t_hi,
                                       double dt) {
  ConcentrationStudy study;
  study.widths = widths;
  study.fits.resize(widths.size());
  SolverConfig sc;
  sc.dt = dt;
  sc.t_end = t_hi;
  sc.zero_mass = true;
  parallel_for(widths.size(), [&](std::size_t i) {
    const BumpData bump{center.x1(), center.x2(), center.theta(), widths[i], kTwoPi * widths[i], 1.0};
    const EvolveResult run = evolve(make_initial_data(field.grid(), bump), field, sc);
    const auto series = norm_series(run.samples);
    study.fits[i] = fit_decay(series, std::pair{t_lo, t_hi});
  });
  return study;
}

}  // namespace hypolab
