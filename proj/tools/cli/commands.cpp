#include "commands.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <ostream>
#include <sstream>

#include "hypolab/errors.hpp"
#include "hypolab/moments.hpp"
#include "hypolab/parallel.hpp"
#include "hypolab/raw_io.hpp"

namespace hypolab::cli {

namespace fs = std::filesystem;

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string short_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &utc);
  return buf;
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed for " + path.string());
}

std::string config_block(const RunConfig& config) {
  std::string out = "[config]\n" + echo(config) + "\n";
  return out;
}

DensityField initial_state(const RunConfig& config) {
  return make_initial_data(config.grid(), config.initial_data());
}

SolverConfig solver_config(const RunConfig& config, const AbsorptionField& field) {
  SolverConfig s;
  s.dt = config.dt ? *config.dt : SolverConfig::default_dt(field);
  s.t_end = config.t_end;
  s.record_every = config.record_every;
  s.zero_mass = config.zero_mass;
  return s;
}

std::string fit_text(const SimulateResult& r) {
  std::ostringstream os;
  os << "decay fit\n";
  if (!r.fit) {
    os << "  none: " << r.fit_note << '\n';
    return os.str();
  }
  os << "  lambda_emp     " << num(r.fit->lambda_emp) << '\n'
     << "  c_emp          " << num(r.fit->c_emp) << '\n'
     << "  c_fit          " << num(r.fit->c_fit) << '\n'
     << "  window         [" << num(r.fit->t_lo) << ", " << num(r.fit->t_hi) << "]\n"
     << "  residual       " << num(r.fit->residual) << '\n'
     << "  samples        " << r.fit->samples << '\n';
  return os.str();
}

std::string gcc_flag(const GccCertificate& gcc) {
  return gcc.uniform_certified() ? "uniform GCC certified (c_min = " + short_num(gcc.c_min) + ")"
                                 : "uniform GCC not certified (c_min = " + short_num(gcc.c_min) +
                                       ", trapped fraction " + short_num(gcc.trapped_fraction) + ")";
}

}  // namespace

std::string series_csv_body(std::span<const DiagnosticsSample> samples) {
  std::string out = "t,mass,l2,dissipation,good_set_density_sq,sigma_defect\n";
  char buf[256];
  for (const auto& s : samples) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", s.t, s.mass,
                  std::sqrt(s.l2_sq), s.dissipation, s.good_set_density_sq,
                  s.sigma_weighted_defect);
    out += buf;
  }
  return out;
}

void write_series_csv(const fs::path& path, std::span<const DiagnosticsSample> samples) {
  write_text(path, "# generated " + timestamp() + "\n" + series_csv_body(samples));
}

void write_gnuplot(const fs::path& path) {
  write_text(path,
             "set datafile separator ','\n"
             "set key autotitle columnhead\n"
             "set xlabel 't'\n"
             "set multiplot layout 2,1\n"
             "set logscale y\n"
             "plot 'series.csv' using 1:3 with lines title '||g_t||'\n"
             "unset logscale y\n"
             "plot 'series.csv' using 1:4 with lines title 'dissipation'\n"
             "unset multiplot\n");
}

SimulateResult cmd_simulate(const RunConfig& config, const fs::path& out, bool gnuplot) {
  ensure_dir(out);
  const AbsorptionField field = config.build_field();
  const GccCertificate gcc =
      certify_gcc(field, config.scenario.t_star, config.gcc_sampling(field));
  SimulateResult r{evolve(initial_state(config), field, solver_config(config, field)), gcc, {},
                   {}, {}};

  try {
    r.fit = fit_decay(norm_series(r.run.samples));
  } catch (const std::invalid_argument& e) {
    r.fit_note = e.what();
  }
  r.rows.push_back(energy_ledger(r.run.samples));
  r.rows.push_back(mass_conservation(r.run.samples));
  r.rows.push_back(norm_monotonicity(r.run.samples));
  r.rows.push_back(dissipation_factor(r.run.samples));

  write_series_csv(out / "series.csv", r.run.samples);
  write_density(out / "final_state.raw", r.run.final_state);
  if (gnuplot) write_gnuplot(out / "series.gp");

  std::ostringstream os;
  os << config_block(config);
  os << "[run]\n"
     << "scenario       " << config.scenario.name << '\n'
     << "gcc            " << gcc_flag(r.gcc) << '\n'
     << "dt             " << num(r.run.dt) << '\n'
     << "steps          " << r.run.steps << '\n'
     << "samples        " << r.run.samples.size() << '\n'
     << "mean removed   " << num(r.run.subtracted_mean) << "\n\n";
  os << fit_text(r) << '\n';
  os << make_ledger(field, config.scenario.t_star).to_text() << '\n';
  os << format_rows(r.rows);
  write_text(out / "report.txt", os.str());
  return r;
}

GccCertificate cmd_gcc(const RunConfig& config, const fs::path& out) {
  ensure_dir(out);
  const AbsorptionField field = config.build_field();
  const GccCertificate gcc = certify_gcc(field, config.scenario.t_star, config.gcc_sampling(field));
  std::ostringstream os;
  os << config_block(config) << gcc.to_text() << gcc_flag(gcc) << '\n';
  if (!config.sigma_raw && config.scenario.region.size() > 1) {
    const auto reach = component_reachability(config.scenario.region, config.scenario.t_star);
    os << "\nreachability (" << reach.components << " components, T* = "
       << num(reach.t_star) << ")\n";
    for (std::size_t i = 0; i < reach.components; ++i) {
      os << "  ";
      for (std::size_t j = 0; j < reach.components; ++j) os << (reach.at(i, j) ? '1' : '0');
      os << '\n';
    }
    os << "  irreducible    " << (reach.irreducible() ? "yes" : "no") << '\n';
    if (reach.min_irreducible_t_star) {
      os << "  min T* for irreducibility " << num(*reach.min_irreducible_t_star) << '\n';
    }
  }
  write_text(out / "gcc.txt", os.str());
  return gcc;
}

VerifyResult cmd_verify(const RunConfig& config, const fs::path& out, bool gnuplot) {
  ensure_dir(out);
  const AbsorptionField field = config.build_field();
  const double t_star = config.scenario.t_star;
  const SolverConfig solver = solver_config(config, field);
  auto wants = [&](const char* name) {
    return std::find(config.verifications.begin(), config.verifications.end(), name) !=
           config.verifications.end();
  };

  // Snapshots on the nodes of ψ over [0, T*] feed the moment and average steps.
  const int n_t = 21;
  const bool need_snapshots = wants("claim") && t_star <= solver.t_end + 1e-12;
  std::vector<DensityField> snapshots;
  std::vector<double> snapshot_times;
  DiagnosticsHook hook;
  if (need_snapshots) {
    hook = [&](int, double t, const DensityField& g) {
      const double node = t * (n_t - 1) / t_star;
      if (t <= t_star + 1e-9 && std::abs(node - std::round(node)) < 1e-6) {
        snapshots.push_back(g);
        snapshot_times.push_back(t);
      }
    };
  }

  const GccCertificate gcc = certify_gcc(field, t_star, config.gcc_sampling(field));
  VerifyResult v{SimulateResult{evolve(initial_state(config), field, solver, hook), gcc, {}, {}, {}},
                 {}, true};
  SimulateResult& sim = v.simulation;
  try {
    sim.fit = fit_decay(norm_series(sim.run.samples));
  } catch (const std::invalid_argument& e) {
    sim.fit_note = e.what();
  }
  write_series_csv(out / "series.csv", sim.run.samples);
  if (gnuplot) write_gnuplot(out / "series.gp");

  const auto& samples = sim.run.samples;
  ConstantsLedger ledger = make_ledger(field, t_star);
  std::optional<NormalizedControl> control;
  std::string control_note;
  try {
    control = normalize_chi(field, t_star, config.gcc_sampling(field));
    ledger = make_ledger(control->field, t_star);
  } catch (const NumericalError& e) {
    control_note = e.what();
  }

  auto not_applicable = [](std::string name, std::string note) {
    InequalityRow r;
    r.name = std::move(name);
    r.status = RowStatus::not_applicable;
    r.note = std::move(note);
    return r;
  };

  if (wants("energy")) {
    v.rows.push_back(energy_ledger(samples));
    v.identities_hold &= v.rows.back().status == RowStatus::pass;
    v.rows.push_back(dissipation_factor(samples));
  }
  if (wants("mass")) {
    v.rows.push_back(mass_conservation(samples));
    v.identities_hold &= v.rows.back().status == RowStatus::pass;
  }
  if (wants("monotone")) v.rows.push_back(norm_monotonicity(samples));

  if (wants("sufficient")) {
    if (solver.t_end + 1e-12 < t_star) {
      v.rows.push_back(not_applicable("sufficient", "horizon shorter than T*"));
    } else {
      double lambda = 0.0;
      std::string note;
      if (config.verify_lambda) {
        lambda = *config.verify_lambda;
        note = "configured lambda";
      } else {
        int windows = 0;
        for (double t0 = 0.0; t0 + t_star <= solver.t_end + 1e-9; t0 += t_star, ++windows) {
          const auto m = measure_lambda(samples, t_star, t0);
          if (!m.vacuous) lambda = std::max(lambda, m.lambda);
        }
        note = "lambda = max over " + std::to_string(windows) + " window(s)";
      }
      InequalityRow row = verify_sufficient(samples, lambda, t_star);
      row.note = row.note.empty() ? note : row.note + "; " + note;
      v.rows.push_back(row);
      if (lambda > 1.0) {
        ledger.lambda = lambda;
        const auto dc = decay_from_lambda(lambda, t_star);
        ledger.big_c = dc.big_c;
        ledger.big_lambda = dc.big_lambda;
      }
    }
  }
  if (wants("following")) {
    if (!control) {
      v.rows.push_back(not_applicable("following", "chi not normalizable: " + control_note));
    } else if (solver.t_end + 1e-12 < t_star) {
      v.rows.push_back(not_applicable("following", "horizon shorter than T*"));
    } else {
      v.rows.push_back(verify_following_windows(samples, {ledger.c1, ledger.c2}, t_star));
    }
  }
  if (wants("quant")) {
    if (solver.t_end + 1e-12 < t_star) {
      v.rows.push_back(not_applicable("quant", "horizon shorter than T*"));
    } else {
      const QuantMeasurement q = verify_quant(samples, t_star, config.verify_delta);
      ledger.delta = q.delta;
      ledger.c_delta = q.c_delta;
      v.rows.push_back(quant_row(q));
    }
  }
  if (wants("claim")) {
    if (snapshots.size() != static_cast<std::size_t>(n_t)) {
      v.rows.push_back(not_applicable("claim", "snapshots on [0, T*] unavailable"));
    } else {
      const auto end = sample_at(samples, t_star);
      const double d_int = end ? dissipation_integral(samples, 0, *end) : 0.0;
      const ClaimBound cb = measure_claim_bound(snapshots, snapshot_times, field, d_int);
      InequalityRow row;
      row.name = "claim";
      row.lhs = cb.defect_integral;
      row.rhs = cb.c3 * cb.dissipation_integral;
      row.status = cb.vacuous ? RowStatus::vacuous : RowStatus::measured;
      row.note = "C3 = " + short_num(cb.c3);
      v.rows.push_back(row);
      if (!cb.vacuous) ledger.c3 = cb.c3;
      if (control) {
        const auto dt_quad = config.gcc_sampling(field).dt_quad;
        const ControlWeight psi = build_psi(control->field, t_star, n_t, dt_quad);
        const AverageConstants ac = measure_average_constants(snapshots, field, psi, d_int);
        ledger.c4 = ac.c4;
        ledger.c5 = ac.c5;
        ledger.c6 = ac.c6;
      }
    }
  }

  std::ostringstream os;
  os << config_block(config);
  os << "[run]\n"
     << "scenario       " << config.scenario.name << '\n'
     << "gcc            " << gcc_flag(sim.gcc) << '\n'
     << "dt             " << num(sim.run.dt) << '\n'
     << "steps          " << sim.run.steps << "\n\n";
  os << fit_text(sim) << '\n' << ledger.to_text() << '\n' << format_rows(v.rows);
  if (!v.identities_hold) os << "\nmandatory identity failed\n";
  write_text(out / "verify.txt", os.str());
  return v;
}

BogovskiiResult cmd_bogovskii(const RunConfig& config, const fs::path& out) {
  ensure_dir(out);
  const BogovskiiConfig& b = config.bogovskii;
  const StarDomain domain = [&] {
    if (b.domain == "disk") return StarDomain::disk(b.radius, b.cells);
    if (b.domain == "square") return StarDomain::rectangle(b.width, b.width, b.cells);
    if (b.domain == "rectangle") return StarDomain::rectangle(b.width, b.height, b.cells);
    return StarDomain::l_shape(b.width, b.cells);
  }();
  std::vector<double> h;
  if (b.datum == "zero") {
    h.assign(domain.cells(), 0.0);
  } else if (b.datum == "random") {
    h = random_trig_ensemble(domain, 1, config.seed).front();
  } else {
    const ManufacturedCase mc = default_manufactured_case(domain);
    h = sample_on_domain(domain, [&](double x, double y) { return mc.divergence(x, y); });
  }

  BogovskiiResult r;
  r.solution = bogovskii_solve(domain, h, BumpWeight(domain.ball()));
  r.c_d = estimate_c_d(domain, random_trig_ensemble(domain, b.members, config.seed));

  const std::uint64_t dims[2] = {static_cast<std::uint64_t>(domain.ny()),
                                 static_cast<std::uint64_t>(domain.nx())};
  write_raw(out / "f1.raw", dims, r.solution.f1);
  write_raw(out / "f2.raw", dims, r.solution.f2);

  const DivergenceSolution& s = r.solution;
  std::ostringstream os;
  os << config_block(config);
  os << "[divergence]\n"
     << "domain               " << domain.describe() << '\n'
     << "datum                " << b.datum << '\n'
     << "mesh                 " << domain.nx() << " x " << domain.ny() << ", cell "
     << num(domain.cell()) << '\n'
     << "mean correction      " << num(s.mean_correction) << '\n'
     << "h norm               " << num(s.h_norm) << '\n'
     << "divergence residual  " << num(s.divergence_residual) << '\n'
     << "relative residual    " << num(s.h_norm > 0 ? s.divergence_residual / s.h_norm : 0.0)
     << '\n'
     << "boundary max |F|     " << num(s.boundary_max) << '\n'
     << "H1 norm              " << num(s.h1_norm) << '\n'
     << "C_D witness          " << num(s.c_d_witness) << '\n'
     << "C_D estimate         " << num(r.c_d->c_d) << " (max over " << r.c_d->witnesses.size()
     << " random members)\n";
  write_text(out / "divergence.txt", os.str());
  return r;
}

DecayCertificate cmd_certificate(const RunConfig& config, const fs::path& out) {
  ensure_dir(out);
  const AbsorptionField field = config.build_field();
  CertificateConfig cc = config.certificate;
  cc.seed = config.seed;
  const DecayCertificate cert =
      end_to_end_certificate(field, config.scenario.t_star, cc, config.gcc_sampling(field));
  write_text(out / "certificate.txt", config_block(config) + cert.to_text());
  return cert;
}

int run_command(const std::string& name, const RunConfig& config, const fs::path& out,
                bool gnuplot, std::ostream& log, std::ostream& err) {
  try {
    set_thread_count(config.threads);
    if (name == "simulate") {
      const auto r = cmd_simulate(config, out, gnuplot);
      log << "simulate: " << r.run.samples.size() << " samples, " << gcc_flag(r.gcc);
      if (r.fit) log << ", lambda_emp " << short_num(r.fit->lambda_emp);
      log << '\n';
    } else if (name == "gcc") {
      const auto g = cmd_gcc(config, out);
      log << "gcc: " << gcc_flag(g) << '\n';
    } else if (name == "verify") {
      const auto v = cmd_verify(config, out, gnuplot);
      log << format_rows(v.rows);
      if (!v.identities_hold) {
        err << "verify: a mandatory identity failed\n";
        return kNumericalAbort;
      }
    } else if (name == "bogovskii") {
      const auto b = cmd_bogovskii(config, out);
      log << "bogovskii: residual " << short_num(b.solution.divergence_residual) << ", C_D "
          << short_num(b.c_d->c_d) << '\n';
    } else if (name == "certificate") {
      const auto c = cmd_certificate(config, out);
      log << "certificate: " << (c.issued ? "issued" : "not issued: " + c.reason) << '\n';
    } else {
      err << "unknown command '" << name << "'\n";
      return kConfigError;
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const NumericalError& e) {
    err << "numerical abort: " << e.what() << '\n';
    return kNumericalAbort;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << '\n';
    return kIoError;
  } catch (const fs::filesystem_error& e) {
    err << "i/o error: " << e.what() << '\n';
    return kIoError;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  }
  return kOk;
}

}  // namespace hypolab::cli
