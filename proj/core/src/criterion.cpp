#include "hypolab/criterion.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace hypolab {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6e", v);
  return buf;
}

std::string opt(const std::optional<double>& v) { return v ? num(*v) : "-"; }

// Trapezoid of a member over samples with index in [a, b], plus a Richardson
// style error estimate from the same sum on every other node.
struct TrapezoidResult {
  double value = 0.0;
  double error = 0.0;
};

TrapezoidResult trapezoid(std::span<const DiagnosticsSample> s, std::size_t a, std::size_t b,
                          double DiagnosticsSample::*member) {
  TrapezoidResult r;
  for (std::size_t i = a; i < b; ++i) {
    r.value += 0.5 * (s[i].*member + s[i + 1].*member) * (s[i + 1].t - s[i].t);
  }
  const std::size_t n = b - a;
  if (n >= 4 && n % 2 == 0) {
    double coarse = 0.0;
    for (std::size_t i = a; i < b; i += 2) {
      coarse += 0.5 * (s[i].*member + s[i + 2].*member) * (s[i + 2].t - s[i].t);
    }
    r.error = std::abs(r.value - coarse) / 3.0;
  } else if (n >= 1) {
    double left = 0.0;
    for (std::size_t i = a; i < b; ++i) left += (s[i].*member) * (s[i + 1].t - s[i].t);
    r.error = std::abs(r.value - left);
  }
  return r;
}

void require_samples(std::span<const DiagnosticsSample> s) {
  if (s.empty()) throw std::invalid_argument("run has no recorded samples");
}

}  // namespace

std::string ConstantsLedger::to_text() const {
  std::ostringstream os;
  auto line = [&](const char* name, const std::string& v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "  %-14s ", name);
    os << buf << v << '\n';
  };
  os << "constants\n";
  line("c_p", num(c_p));
  line("t_star", num(t_star));
  line("chi_sup", num(chi_sup));
  line("grad_chi_sup", num(grad_chi_sup));
  line("sigma_sup", num(sigma_sup));
  line("c1", num(c1));
  line("c2", num(c2));
  line("lambda", opt(lambda));
  line("big_c", opt(big_c));
  line("big_lambda", opt(big_lambda));
  line("delta", opt(delta));
  line("c_delta", opt(c_delta));
  line("c_d", opt(c_d));
  line("c3", opt(c3));
  line("c4", opt(c4));
  line("c5", opt(c5));
  line("c6", opt(c6));
  return os.str();
}

DecayConstants decay_from_lambda(double lambda, double t_horizon) {
  if (!(lambda > 1.0) || !std::isfinite(lambda)) {
    throw std::domain_error("λ must be finite and > 1 for a decay certificate");
  }
  if (!(t_horizon > 0.0)) throw std::domain_error("time horizon must be positive");
  const double ratio = lambda / (lambda - 1.0);
  return {std::sqrt(ratio), std::log(ratio) / t_horizon};
}

FollowingConstants following_constants(double c_p, double t_star, double chi_sup,
                                       double grad_chi_sup, double sigma_sup) {
  const double t3 = t_star * t_star * t_star;
  return {4.0 * c_p * chi_sup + 4.0 * t_star * chi_sup +
              4.0 * t3 * grad_chi_sup * grad_chi_sup * sigma_sup,
          4.0 * chi_sup / kTwoPi};
}

ConstantsLedger make_ledger(const AbsorptionField& field, double t_star) {
  ConstantsLedger l;
  l.t_star = t_star;
  l.chi_sup = field.chi_sup();
  l.grad_chi_sup = field.grad_chi_sup();
  l.sigma_sup = field.sigma_sup();
  const auto c = following_constants(l.c_p, t_star, l.chi_sup, l.grad_chi_sup, l.sigma_sup);
  l.c1 = c.c1;
  l.c2 = c.c2;
  return l;
}

std::string to_string(RowStatus s) {
  switch (s) {
    case RowStatus::pass: return "pass";
    case RowStatus::fail: return "FAIL";
    case RowStatus::vacuous: return "vacuous";
    case RowStatus::not_applicable: return "n/a";
    case RowStatus::measured: return "measured";
  }
  return "?";
}

std::string format_rows(std::span<const InequalityRow> rows) {
  std::size_t width = 4;
  for (const auto& r : rows) width = std::max(width, r.name.size());
  std::ostringstream os;
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-*s  %-13s  %-13s  %-13s  %-8s  %-9s  %s\n",
                static_cast<int>(width), "name", "lhs", "rhs", "slack", "status", "tolerance",
                "note");
  os << buf;
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%-*s  %13.6e  %13.6e  %13.6e  %-8s  %9.2e  ",
                  static_cast<int>(width), r.name.c_str(), r.lhs, r.rhs, r.slack(),
                  to_string(r.status).c_str(), r.tolerance);
    os << buf << r.note << '\n';
  }
  return os.str();
}

std::optional<std::size_t> sample_at(std::span<const DiagnosticsSample> samples, double t) {
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (std::abs(samples[i].t - t) <= 1e-9 * std::max(1.0, std::abs(t))) return i;
  }
  return std::nullopt;
}

double dissipation_integral(std::span<const DiagnosticsSample> samples, std::size_t a,
                            std::size_t b) {
  double s = 0.0;
  for (std::size_t i = a + 1; i <= b; ++i) s += samples[i].dissipated;
  return s;
}

InequalityRow energy_ledger(std::span<const DiagnosticsSample> samples) {
  require_samples(samples);
  const std::size_t last = samples.size() - 1;
  InequalityRow r;
  r.name = "energy ledger";
  r.lhs = samples.front().l2_sq - samples[last].l2_sq;
  r.rhs = dissipation_integral(samples, 0, last);
  r.tolerance = 1e-6 * std::max(std::abs(r.lhs), std::abs(r.rhs)) + 1e-13 * samples.front().l2_sq;
  r.status = std::abs(r.lhs - r.rhs) <= r.tolerance ? RowStatus::pass : RowStatus::fail;
  r.note = "|g0|^2 - |gT|^2 = int D dt";
  return r;
}

InequalityRow dissipation_factor(std::span<const DiagnosticsSample> samples) {
  require_samples(samples);
  const std::size_t last = samples.size() - 1;
  InequalityRow r;
  r.name = "dissipation factor";
  r.lhs = samples.front().l2_sq - samples[last].l2_sq;
  r.rhs = trapezoid(samples, 0, last, &DiagnosticsSample::dissipation).value;
  r.status = RowStatus::measured;
  if (r.rhs > 0.0) {
    r.note = "factor " + num(r.lhs / r.rhs);
  } else {
    r.status = RowStatus::vacuous;
    r.note = "no dissipation";
  }
  return r;
}

InequalityRow mass_conservation(std::span<const DiagnosticsSample> samples) {
  require_samples(samples);
  const double m0 = samples.front().mass;
  double drift = 0.0;
  for (const auto& s : samples) drift = std::max(drift, std::abs(s.mass - m0));
  InequalityRow r;
  r.name = "mass conservation";
  r.lhs = drift;
  r.rhs = 1e-12 * std::abs(m0) + 1e-14;
  r.tolerance = 0.0;
  r.status = r.lhs <= r.rhs ? RowStatus::pass : RowStatus::fail;
  r.note = "max |m(t) - m(0)|";
  return r;
}

InequalityRow norm_monotonicity(std::span<const DiagnosticsSample> samples) {
  require_samples(samples);
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < samples.size(); ++i) {
    worst = std::max(worst, samples[i].l2_sq - samples[i - 1].l2_sq);
  }
  if (samples.size() < 2) worst = 0.0;
  InequalityRow r;
  r.name = "norm monotonicity";
  r.lhs = worst;
  r.rhs = 0.0;
  r.tolerance = 1e-13 * samples.front().l2_sq + 1e-300;
  r.status = r.lhs <= r.tolerance ? RowStatus::pass : RowStatus::fail;
  r.note = "max increase of |g|^2 between samples";
  return r;
}

LambdaMeasurement measure_lambda(std::span<const DiagnosticsSample> samples, double t_horizon,
                                 double t0) {
  require_samples(samples);
  const auto a = sample_at(samples, t0);
  const auto b = sample_at(samples, t0 + t_horizon);
  if (!a || !b) throw std::invalid_argument("λ window does not start and end on recorded samples");
  LambdaMeasurement m;
  m.initial_l2_sq = samples[*a].l2_sq;
  m.dissipation_integral = dissipation_integral(samples, *a, *b);
  m.horizon = samples[*b].t - samples[*a].t;
  m.vacuous = !(m.dissipation_integral >= 1e-14 * m.initial_l2_sq) || m.initial_l2_sq == 0.0;
  m.lambda = m.vacuous ? std::numeric_limits<double>::infinity()
                       : m.initial_l2_sq / m.dissipation_integral;
  return m;
}

InequalityRow verify_sufficient(std::span<const DiagnosticsSample> samples, double lambda,
                                double t_horizon) {
  const auto m = measure_lambda(samples, t_horizon);
  InequalityRow r;
  r.name = "sufficient criterion";
  r.lhs = m.initial_l2_sq;
  r.rhs = lambda * m.dissipation_integral;
  r.tolerance = 1e-10 * m.initial_l2_sq;
  if (m.vacuous) {
    r.status = RowStatus::vacuous;
    r.note = "criterion vacuous: int D below 1e-14 |g0|^2";
  } else {
    r.status = r.lhs <= r.rhs + r.tolerance ? RowStatus::pass : RowStatus::fail;
    r.note = "lambda_emp " + num(m.lambda);
  }
  return r;
}

InequalityRow verify_following(std::span<const DiagnosticsSample> samples,
                               const FollowingConstants& constants, double t_star, double t0) {
  require_samples(samples);
  const auto a = sample_at(samples, t0);
  const auto b = sample_at(samples, t0 + t_star);
  if (!a || !b) throw std::invalid_argument("following window does not match recorded samples");
  const double d_int = dissipation_integral(samples, *a, *b);
  const auto dens = trapezoid(samples, *a, *b, &DiagnosticsSample::good_set_density_sq);
  InequalityRow r;
  r.name = "following";
  r.lhs = samples[*a].l2_sq;
  r.rhs = constants.c1 * d_int + constants.c2 * dens.value;
  r.tolerance = 1e-8 * r.lhs + constants.c2 * dens.error;
  r.status = r.slack() >= -r.tolerance ? RowStatus::pass : RowStatus::fail;
  if (r.lhs == 0.0 && r.rhs == 0.0) {
    r.note = "zero data";
  } else {
    r.note = "ratio " + num(r.rhs / r.lhs);
  }
  return r;
}

InequalityRow verify_following_windows(std::span<const DiagnosticsSample> samples,
                                       const FollowingConstants& constants, double t_star) {
  require_samples(samples);
  std::optional<InequalityRow> worst;
  double worst_ratio = std::numeric_limits<double>::infinity();
  int windows = 0;
  int failures = 0;
  for (const auto& s : samples) {
    if (!sample_at(samples, s.t + t_star)) continue;
    InequalityRow r = verify_following(samples, constants, t_star, s.t);
    ++windows;
    if (r.status == RowStatus::fail) ++failures;
    const double ratio = r.lhs > 0.0 ? r.rhs / r.lhs : std::numeric_limits<double>::infinity();
    if (!worst || ratio < worst_ratio || (r.status == RowStatus::fail && worst->status != RowStatus::fail)) {
      worst_ratio = ratio;
      worst = r;
    }
  }
  if (!worst) throw std::invalid_argument("run is shorter than T*");
  worst->name = "following (all windows)";
  if (failures > 0) worst->status = RowStatus::fail;
  worst->note += ", " + std::to_string(windows) + " windows, " + std::to_string(failures) +
                 " failed";
  return *worst;
}

double time_integral(std::span<const DiagnosticsSample> samples, std::size_t a, std::size_t b,
                     double DiagnosticsSample::*member) {
  return trapezoid(samples, a, b, member).value;
}

QuantMeasurement verify_quant(std::span<const DiagnosticsSample> samples, double t_star,
                              double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("δ must be positive");
  require_samples(samples);
  const auto b = sample_at(samples, t_star);
  if (!b) throw std::invalid_argument("run does not reach T* on a recorded sample");
  QuantMeasurement q;
  q.delta = delta;
  q.density_integral = time_integral(samples, 0, *b, &DiagnosticsSample::good_set_density_sq);
  q.dissipation_integral = dissipation_integral(samples, 0, *b);
  q.norm_integral = time_integral(samples, 0, *b, &DiagnosticsSample::l2_sq);
  const double excess = q.density_integral - delta * q.norm_integral;
  if (excess <= 0.0) {
    q.c_delta = 0.0;
  } else if (q.dissipation_integral > 0.0) {
    q.c_delta = excess / q.dissipation_integral;
  } else {
    q.c_delta = std::numeric_limits<double>::infinity();
  }
  return q;
}

InequalityRow quant_row(const QuantMeasurement& q) {
  InequalityRow r;
  r.name = "quant delta=" + num(q.delta);
  r.lhs = q.density_integral;
  r.rhs = q.c_delta * q.dissipation_integral + q.delta * q.norm_integral;
  r.status = std::isfinite(q.c_delta) ? RowStatus::measured : RowStatus::fail;
  r.note = "C_delta " + num(q.c_delta);
  return r;
}

AverageConstants measure_average_constants(std::span<const DensityField> snapshots,
                                           const AbsorptionField& field, const ControlWeight& psi,
                                           double dissipation_integral) {
  if (static_cast<int>(snapshots.size()) != psi.n_t()) {
    throw std::invalid_argument("one snapshot per ψ time node is required");
  }
  const GridSpec& g = field.grid();
  const int nt = g.n_theta();
  const double h = psi.t_star() / (psi.n_t() - 1);
  const auto& support = field.support_mask();
  auto sig = field.sigma().values();
  const double m_eq = GridSpec::local_equilibrium();

  AverageConstants a;
  a.dissipation_integral = dissipation_integral;
  for (int k = 0; k < psi.n_t(); ++k) {
    const DensityField& f = snapshots[static_cast<std::size_t>(k)];
    if (!(f.grid() == g)) throw std::invalid_argument("snapshot grid mismatch");
    const double w = (k == 0 || k == psi.n_t() - 1) ? 0.5 * h : h;
    auto slice = psi.slice(k);
    auto v = f.values();
    double density = 0.0, psi_avg = 0.0, j1 = 0.0, j2 = 0.0, defect = 0.0;
    for (std::size_t site = 0; site < g.sites(); ++site) {
      double rho = 0.0;
      for (int j = 0; j < nt; ++j) rho += v[site * nt + j];
      rho *= g.dtheta();
      if (support[site]) density += rho;
      for (int j = 0; j < nt; ++j) {
        const std::size_t i = site * nt + j;
        const double fluct = m_eq * rho - v[i];
        psi_avg += m_eq * rho * slice[i];
        j1 += fluct * slice[i];
        j2 += v[i] * slice[i];
        defect += sig[site] * fluct * fluct;
      }
    }
    a.g_avg += w * density * g.dx() * g.dx();
    a.psi_avg += w * psi_avg * g.cell_volume();
    a.j1 += w * j1 * g.cell_volume();
    a.j2 += w * j2 * g.cell_volume();
    a.defect_integral += w * defect * g.cell_volume();
  }
  const double area = field.support_area();
  a.g_avg /= psi.t_star() * area;
  const double root_d = std::sqrt(dissipation_integral);
  const auto ratio = [](double num_, double den) {
    return den > 0.0 ? num_ / den : std::numeric_limits<double>::infinity();
  };
  a.c4 = ratio(std::abs(a.g_avg - a.psi_avg), root_d);
  a.c5 = ratio(std::abs(a.j1), std::sqrt(a.defect_integral));
  a.c6 = ratio(std::abs(a.j2), root_d);
  return a;
}

}  // namespace hypolab
