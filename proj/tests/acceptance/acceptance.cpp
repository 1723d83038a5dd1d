// Desk-scale acceptance checks. `hypolab_acceptance <n>` runs criterion n and
// prints one line; exit 0 on pass, 1 on failure, 77 when the only failures are
// the ones recorded as unattainable (reported as FAIL all the same).

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli/commands.hpp"
#include "cli/config.hpp"
#include "hypolab/bogovskii.hpp"
#include "hypolab/certificate.hpp"
#include "hypolab/characteristics.hpp"
#include "hypolab/criterion.hpp"
#include "hypolab/diagnostics.hpp"
#include "hypolab/errors.hpp"
#include "hypolab/initial_data.hpp"
#include "hypolab/moments.hpp"
#include "hypolab/scenarios.hpp"
#include "hypolab/solver.hpp"

using namespace hypolab;
namespace fs = std::filesystem;

namespace {

constexpr int kNx = 64;
constexpr int kNtheta = 32;
constexpr double kDt = 0.01;
constexpr double kTstar = 2.0;
constexpr int kUnattainable = 77;

const GridSpec kDesk(kNx, kNtheta);

struct Outcome {
  bool pass = false;
  std::string detail;
  // Failure limited to what the ledger records as unattainable.
  bool recorded = false;
};

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

AbsorptionField preset_field(const std::string& name, const GridSpec& grid = kDesk) {
  return build_scenario_field(grid, scenario_preset(name));
}

EvolveResult run(const AbsorptionField& field, const InitialData& data, double t_end,
                 bool zero_mass, const DiagnosticsHook& hook = {}) {
  SolverConfig sc;
  sc.dt = kDt;
  sc.t_end = t_end;
  sc.zero_mass = zero_mass;
  return evolve(make_initial_data(field.grid(), data), field, sc, hook);
}

double relative_gap(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// Runs shared by criteria 1 and 2: random data and a single mode on every preset.
template <class Check>
Outcome over_preset_runs(Check&& check) {
  Outcome o{true, {}};
  for (const auto& name : scenario_names()) {
    const AbsorptionField field = preset_field(name);
    const EvolveResult random_run = run(field, RandomBandLimitedData{1, 4, 4, 1.0}, 4.0, true);
    const EvolveResult mode_run = run(field, SingleModeData{0.1, 1, 0}, 4.0, false);
    for (const auto* r : {&random_run, &mode_run}) {
      std::string note;
      if (!check(r->samples, note)) o.pass = false;
      if (!note.empty()) o.detail += name + (r == &random_run ? "/random " : "/mode ") + note + "; ";
    }
  }
  return o;
}

Outcome conservation() {
  return over_preset_runs([](std::span<const DiagnosticsSample> s, std::string& note) {
    const InequalityRow m = mass_conservation(s);
    const InequalityRow mono = norm_monotonicity(s);
    // Zero-mass runs are held to the absolute floor of the mass row.
    const double m0 = std::abs(s.front().mass);
    const bool relative = m0 > 1e-12 * std::sqrt(s.front().l2_sq);
    note = "drift " + fmt(relative ? m.lhs / m0 : m.lhs) + (relative ? " rel" : " abs") +
           ", rise " + fmt(mono.lhs);
    return m.status == RowStatus::pass && mono.status == RowStatus::pass;
  });
}

Outcome energy_identity() {
  double worst = 0.0;
  Outcome o = over_preset_runs([&](std::span<const DiagnosticsSample> s, std::string&) {
    const InequalityRow row = energy_ledger(s);
    worst = std::max(worst, std::abs(row.lhs - row.rhs) / std::max(row.lhs, 1e-300));
    return row.status == RowStatus::pass && std::abs(row.lhs - row.rhs) <= 1e-6 * row.lhs;
  });
  o.detail = "max relative gap " + fmt(worst) + " over 8 runs (tol 1e-6)";
  return o;
}

Outcome sub_steps() {
  const AbsorptionField cross = preset_field("cross");
  const DensityField f = make_initial_data(kDesk, RandomBandLimitedData{3, 6, 6, 1.0});

  const double n0 = l2_norm_sq(f);
  DensityField moved = f;
  for (double dt : {0.37, 0.01, 1.3}) moved = step_transport(moved, dt);
  const double transport_gap = std::abs(l2_norm_sq(moved) - n0) / n0;

  const auto cosine = DensityField::from_function(kDesk, [](double, double, double th) {
    return std::cos(th);
  });
  const DensityField damped = step_collision(cosine, cross, kDt);
  double collision_gap = 0.0;
  for (int i1 = 0; i1 < kNx; ++i1)
    for (int i2 = 0; i2 < kNx; ++i2) {
      const double factor = std::exp(-cross.sigma()(i1, i2) * kDt);
      for (int j = 0; j < kNtheta; ++j)
        collision_gap =
            std::max(collision_gap, std::abs(damped(i1, i2, j) - factor * std::cos(kDesk.theta(j))));
    }

  // Self-convergence between dt and dt/2, horizon 0.5.
  auto solve = [&](double dt) {
    SplitStepper stepper(kDesk, cross.sigma());
    stepper.load(f);
    const int steps = static_cast<int>(std::lround(0.5 / dt));
    for (int k = 0; k < steps; ++k) stepper.strang(dt);
    return stepper.state();
  };
  const DensityField u1 = solve(kDt), u2 = solve(kDt / 2), u4 = solve(kDt / 4);
  const double e1 = std::sqrt(l2_norm_sq(u1 - u2)), e2 = std::sqrt(l2_norm_sq(u2 - u4));
  const double order = std::log2(e1 / e2);

  Outcome o;
  o.pass = transport_gap <= 1e-12 && collision_gap <= 1e-12 && std::abs(order - 2.0) <= 0.2;
  o.detail = "transport L2 gap " + fmt(transport_gap) + ", collision gap " + fmt(collision_gap) +
             ", Strang order " + fmt(order);
  return o;
}

Outcome poincare() {
  const AbsorptionField field = preset_field("cross");
  std::size_t violations = 0, weighted = 0;
  double worst_ratio = 0.0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const DensityField g = make_initial_data(kDesk, RandomBandLimitedData{seed, 4, 8, 1.0});
    const MicroCoercivity mc = micro_coercivity_defect(g, field);
    violations += mc.unweighted_violations;
    weighted += mc.weighted_violations;
    worst_ratio = std::max(worst_ratio, mc.max_ratio);
  }
  const auto harmonic = DensityField::from_function(kDesk, [](double x1, double x2, double th) {
    return 2.0 + std::sin(kTwoPi * x2) + (1.0 + 0.5 * std::sin(kTwoPi * x1)) * std::cos(th) +
           0.3 * std::sin(th);
  });
  const double sharp = micro_coercivity_defect(harmonic, field).max_ratio;
  Outcome o;
  o.pass = violations == 0 && weighted == 0 && std::abs(sharp - 1.0) <= 1e-10;
  o.detail = "violations " + std::to_string(violations) + " (weighted " + std::to_string(weighted) +
             "), max ratio " + fmt(worst_ratio) + ", first harmonic |ratio-1| " +
             fmt(std::abs(sharp - 1.0));
  return o;
}

Outcome gcc() {
  const AbsorptionField uniform = preset_field("uniform");
  const GccCertificate u = certify_gcc(uniform, kTstar, default_gcc_sampling(uniform));
  const AbsorptionField band = preset_field("band");
  const GccCertificate b = certify_gcc(band, kTstar, default_gcc_sampling(band));
  const bool horizontal = std::abs(std::sin(b.worst_point.theta())) <= 1e-12;

  const AbsorptionField cross = preset_field("cross");
  const GccSampling s = default_gcc_sampling(cross);
  const GccCertificate c = certify_gcc(cross, kTstar, s);
  const AbsorptionField fine = preset_field("cross", GridSpec(2 * kNx, kNtheta));
  const GccCertificate oracle =
      certify_gcc(fine, kTstar, GccSampling{2 * s.positions, 2 * s.angles, s.dt_quad / 2});
  const double gap = relative_gap(c.c_min, oracle.c_min);

  Outcome o;
  o.pass = relative_gap(u.c_min, kTstar) <= 1e-12 && b.c_min == 0.0 && horizontal &&
           c.c_min > 0.0 && gap <= 0.02;
  o.detail = "uniform c_min " + fmt(u.c_min) + ", band c_min " + fmt(b.c_min) + " at theta " +
             fmt(b.worst_point.theta()) + ", cross c_min " + fmt(c.c_min) + " vs oracle " +
             fmt(oracle.c_min) + " (gap " + fmt(gap) + ")";
  return o;
}

Outcome psi_average() {
  const AbsorptionField cross = preset_field("cross");
  const GccSampling s = default_gcc_sampling(cross);
  const NormalizedControl control = normalize_chi(cross, kTstar, s);
  const ControlWeight psi = build_psi(control.field, kTstar, 21, s.dt_quad);
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const PhasePoint z(unit(rng), unit(rng), kTwoPi * unit(rng));
    worst = std::max(worst, std::abs(psi.average_along_flow(z) - 1.0));
  }
  return {worst <= 1e-6, "max |avg - 1| " + fmt(worst) + " over 1000 points"};
}

Outcome decay_certificate() {
  Outcome o{true, {}};
  bool only_recorded = true;
  for (const std::string name : {"uniform", "cross", "two-disks"}) {
    const AbsorptionField field = preset_field(name);
    const DecayCertificate cert =
        end_to_end_certificate(field, kTstar, CertificateConfig{}, default_gcc_sampling(field));
    const bool ok = cert.issued && cert.constants.big_c >= 1.0 && cert.constants.big_lambda > 0.0 &&
                    cert.held_out_pass;
    o.detail += name + ": ";
    if (!cert.issued) {
      o.detail += "not issued (c_min " + fmt(cert.gcc.c_min) + "); ";
      // Two-disks leaves trapped rays, so no certificate can exist.
      only_recorded &= name == "two-disks" && cert.gcc.c_min == 0.0;
    } else {
      o.detail += "C " + fmt(cert.constants.big_c) + " Lambda " + fmt(cert.constants.big_lambda) +
                  " margin " + fmt(cert.held_out_margin) + " (at rate " + fmt(cert.energy_rate) +
                  ": " + fmt(cert.held_out_margin_energy_rate) + "); ";
      // A held-out violation that disappears at the energy-identity rate is the
      // recorded factor-2 conflict in Λ.
      if (!ok) only_recorded &= cert.held_out_margin_energy_rate >= 0.0;
    }
    o.pass &= ok;
  }
  o.recorded = !o.pass && only_recorded;
  return o;
}

Outcome concentration() {
  const AbsorptionField band = preset_field("band");
  const GccCertificate g = certify_gcc(band, kTstar, default_gcc_sampling(band));
  const ConcentrationStudy study =
      concentration_study(band, PhasePoint(0.5, 0.0, 0.0), {0.2, 0.1, 0.05}, 2.0, 10.0, kDt);
  Outcome o;
  o.pass = !g.uniform_certified() && study.strictly_decreasing();
  o.detail = "band uniform certificate " + std::string(g.uniform_certified() ? "issued" : "absent") +
             ", Lambda_emp";
  for (const auto& fit : study.fits) o.detail += " " + fmt(fit.lambda_emp);
  return o;
}

Outcome following() {
  Outcome o{true, {}};
  for (const auto& name : scenario_names()) {
    const AbsorptionField field = preset_field(name);
    o.detail += name + ": ";
    std::optional<NormalizedControl> control;
    try {
      control = normalize_chi(field, kTstar, default_gcc_sampling(field));
    } catch (const NumericalError&) {
      o.detail += "N/A (chi not normalizable); ";
      continue;
    }
    const ConstantsLedger ledger = make_ledger(control->field, kTstar);
    for (std::uint64_t seed : {1, 2}) {
      const EvolveResult r = run(field, RandomBandLimitedData{seed, 4, 4, 1.0}, 2 * kTstar, true);
      const InequalityRow row = verify_following_windows(r.samples, {ledger.c1, ledger.c2}, kTstar);
      o.pass &= row.status == RowStatus::pass;
      o.detail += "ratio " + fmt(row.rhs / row.lhs) + " ";
    }
    o.detail += "; ";
  }
  return o;
}

struct SnapshotRun {
  std::vector<DensityField> snapshots;
  std::vector<double> times;
  EvolveResult result;
};

// Snapshots on 21 equispaced nodes of [0, T*].
SnapshotRun snapshot_run(const AbsorptionField& field) {
  SnapshotRun s{{}, {}, EvolveResult{DensityField(field.grid()), {}, 0.0, 0.0, 0}};
  const int stride = static_cast<int>(std::lround(kTstar / 20 / kDt));
  s.result = run(field, RandomBandLimitedData{5, 4, 4, 1.0}, kTstar, true,
                 [&](int step, double t, const DensityField& g) {
                   if (step % stride == 0) {
                     s.snapshots.push_back(g);
                     s.times.push_back(t);
                   }
                 });
  return s;
}

Outcome moments() {
  const auto bio = biorthogonality_matrix(kDesk);
  double bio_gap = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) bio_gap = std::max(bio_gap, std::abs(bio[i][j] - (i == j ? 1.0 : 0.0)));

  const AbsorptionField coarse = preset_field("cross");
  const SnapshotRun a = snapshot_run(coarse);
  double residual = 0.0;
  for (const auto& g : a.snapshots)
    residual = std::max(residual,
                        moment_identity_residual(g, time_derivative(g, coarse), coarse).max_relative());

  auto c3 = [](const AbsorptionField& field, const SnapshotRun& s) {
    const double d = dissipation_integral(s.result.samples, 0, s.result.samples.size() - 1);
    return measure_claim_bound(s.snapshots, s.times, field, d).c3;
  };
  const AbsorptionField fine = preset_field("cross", GridSpec(2 * kNx, kNtheta));
  const SnapshotRun b = snapshot_run(fine);
  const double c_coarse = c3(coarse, a), c_fine = c3(fine, b);
  const double gap = relative_gap(c_coarse, c_fine);

  Outcome o;
  o.pass = bio_gap <= 1e-12 && residual <= 1e-8 && a.snapshots.size() == 21 && gap <= 0.2;
  o.detail = "biorthogonality " + fmt(bio_gap) + ", identity residual " + fmt(residual) +
             " |g|, C3 " + fmt(c_coarse) + " (64) vs " + fmt(c_fine) + " (128), gap " + fmt(gap);
  return o;
}

// Largest central-difference gradient of F over interior cells.
double max_gradient(const StarDomain& d, const DivergenceSolution& s) {
  double g = 0.0;
  const double h = d.cell();
  for (int j = 1; j + 1 < d.ny(); ++j)
    for (int i = 1; i + 1 < d.nx(); ++i) {
      if (!d.inside(i, j)) continue;
      for (const auto* f : {&s.f1, &s.f2}) {
        const double gx = ((*f)[d.index(i + 1, j)] - (*f)[d.index(i - 1, j)]) / (2 * h);
        const double gy = ((*f)[d.index(i, j + 1)] - (*f)[d.index(i, j - 1)]) / (2 * h);
        g = std::max(g, std::hypot(gx, gy));
      }
    }
  return g;
}

Outcome bogovskii() {
  auto manufactured = [](int cells) {
    const StarDomain d = StarDomain::disk(1.0, cells);
    const ManufacturedCase mc = default_manufactured_case(d);
    const auto h = sample_on_domain(d, [&](double x, double y) { return mc.divergence(x, y); });
    return std::pair{d, bogovskii_solve(d, h, BumpWeight(d.ball()))};
  };
  const auto [d64, s64] = manufactured(64);
  const auto [d128, s128] = manufactured(128);
  const double r64 = s64.divergence_residual / s64.h_norm;
  const double r128 = s128.divergence_residual / s128.h_norm;
  const double bound = d128.cell() * max_gradient(d128, s128);

  auto c_d = [](const StarDomain& d) {
    return estimate_c_d(d, random_trig_ensemble(d, 8, 11)).c_d;
  };
  const double sq32 = c_d(StarDomain::rectangle(1.0, 1.0, 32));
  const double sq64 = c_d(StarDomain::rectangle(1.0, 1.0, 64));
  const double th32 = c_d(StarDomain::rectangle(1.0, 0.25, 32));
  const double th64 = c_d(StarDomain::rectangle(1.0, 0.25, 64));

  Outcome o;
  o.pass = r128 <= 1e-3 && r128 <= 0.6 * r64 && s128.boundary_max <= bound &&
           relative_gap(sq32, sq64) <= 0.3 && relative_gap(th32, th64) <= 0.3 && th64 > sq64;
  o.detail = "residual " + fmt(r64) + " (64) " + fmt(r128) + " (128), boundary max " +
             fmt(s128.boundary_max) + " <= " + fmt(bound) + ", C_D square " + fmt(sq32) + "/" +
             fmt(sq64) + " thin " + fmt(th32) + "/" + fmt(th64);
  return o;
}

Outcome scaling() {
  const AbsorptionField cross = preset_field("cross");
  const DensityField base = make_initial_data(kDesk, RandomBandLimitedData{7, 4, 4, 1.0});
  SolverConfig sc;
  sc.dt = kDt;
  sc.t_end = 2 * kTstar;
  auto rates = [&](double scale) {
    const EvolveResult r = evolve(scale * base, cross, sc);
    return std::pair{measure_lambda(r.samples, kTstar).lambda,
                     fit_decay(norm_series(r.samples)).lambda_emp};
  };
  const auto [lambda0, rate0] = rates(1.0);
  double worst = 0.0;
  for (double s : {0.5, 2.0, 10.0}) {
    const auto [lambda, rate] = rates(s);
    worst = std::max({worst, relative_gap(lambda, lambda0), relative_gap(rate, rate0)});
  }
  return {worst <= 1e-10, "lambda_emp " + fmt(lambda0) + ", Lambda_emp " + fmt(rate0) +
                              ", max relative change " + fmt(worst)};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome determinism() {
  const cli::RunConfig config =
      cli::parse_config("scenario.preset = cross\nsolver.t_end = 2\ninitial.kind = random\nrun.seed = 9\n");
  const fs::path root = fs::temp_directory_path() / "hypolab_acceptance_13";
  fs::remove_all(root);
  cli::cmd_simulate(config, root / "a", false);
  cli::cmd_simulate(config, root / "b", false);
  auto body = [](const std::string& s) { return s.substr(s.find('\n') + 1); };
  const std::string a = slurp(root / "a" / "series.csv"), b = slurp(root / "b" / "series.csv");
  const bool same = !a.empty() && body(a) == body(b);
  fs::remove_all(root);
  return {same, same ? "series.csv identical past the timestamp line"
                     : "series.csv differs between runs"};
}

const std::vector<std::pair<std::string, std::function<Outcome()>>> kCriteria{
    {"conservation", conservation},
    {"energy ledger", energy_identity},
    {"exact sub-steps", sub_steps},
    {"Poincare on S1", poincare},
    {"GCC certificates", gcc},
    {"psi average", psi_average},
    {"decay certificate", decay_certificate},
    {"band concentration", concentration},
    {"trajectory transfer", following},
    {"moment decomposition", moments},
    {"Bogovskii", bogovskii},
    {"scaling invariance", scaling},
    {"determinism", determinism},
};

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: hypolab_acceptance <1-" << kCriteria.size() << ">\n";
    return 2;
  }
  const int n = std::atoi(argv[1]);
  if (n < 1 || n > static_cast<int>(kCriteria.size())) {
    std::cerr << "no criterion " << argv[1] << '\n';
    return 2;
  }
  const auto& [name, check] = kCriteria[static_cast<std::size_t>(n - 1)];
  Outcome o;
  try {
    o = check();
  } catch (const std::exception& e) {
    o = {false, std::string("threw: ") + e.what()};
  }
  std::cout << "criterion " << n << " [" << name << "] " << (o.pass ? "PASS" : "FAIL") << ": "
            << o.detail << (o.recorded ? " (recorded unattainable)" : "") << std::endl;
  if (o.pass) return 0;
  return o.recorded ? kUnattainable : 1;
}
