#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "config.hpp"
#include "hypolab/bogovskii.hpp"
#include "hypolab/certificate.hpp"
#include "hypolab/criterion.hpp"
#include "hypolab/diagnostics.hpp"
#include "hypolab/solver.hpp"

namespace hypolab::cli {

/// Exit status of the front end.
enum ExitCode : int { kOk = 0, kConfigError = 1, kNumericalAbort = 2, kIoError = 3 };

/// Series CSV: a timestamp comment line, the header
/// `t,mass,l2,dissipation,good_set_density_sq,sigma_defect`, then one row per
/// sample with %.17g values. l2 is the norm ‖g_t‖.
void write_series_csv(const std::filesystem::path& path,
                      std::span<const DiagnosticsSample> samples);
std::string series_csv_body(std::span<const DiagnosticsSample> samples);

/// gnuplot script plotting log ‖g_t‖ and the dissipation column of series.csv.
void write_gnuplot(const std::filesystem::path& path);

struct SimulateResult {
  EvolveResult run;
  GccCertificate gcc;
  std::optional<DecayFit> fit;
  std::string fit_note;  // why no fit was produced
  std::vector<InequalityRow> rows;
};

/// Builds σ and the initial data, runs evolve, writes series.csv, report.txt
/// and final_state.raw into `out`.
SimulateResult cmd_simulate(const RunConfig& config, const std::filesystem::path& out,
                            bool gnuplot);

/// GCC certificate of σ (plus reachability for multi-component Σ) into gcc.txt.
GccCertificate cmd_gcc(const RunConfig& config, const std::filesystem::path& out);

struct VerifyResult {
  SimulateResult simulation;
  std::vector<InequalityRow> rows;
  /// False when a mandatory identity (energy ledger, mass) failed.
  bool identities_hold = true;
};

/// Runs inline and checks the configured inequalities into verify.txt.
VerifyResult cmd_verify(const RunConfig& config, const std::filesystem::path& out, bool gnuplot);

struct BogovskiiResult {
  DivergenceSolution solution;
  std::optional<CdEstimate> c_d;
};

/// Divergence problem on the configured domain into divergence.txt, with the
/// field components dumped to f1.raw and f2.raw.
BogovskiiResult cmd_bogovskii(const RunConfig& config, const std::filesystem::path& out);

/// End-to-end decay certificate into certificate.txt.
DecayCertificate cmd_certificate(const RunConfig& config, const std::filesystem::path& out);

/// Dispatches a subcommand and maps errors to exit codes, reporting to `err`.
int run_command(const std::string& name, const RunConfig& config,
                const std::filesystem::path& out, bool gnuplot, std::ostream& log,
                std::ostream& err);

}  // namespace hypolab::cli
