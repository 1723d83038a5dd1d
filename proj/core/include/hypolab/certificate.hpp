#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hypolab/absorption.hpp"
#include "hypolab/characteristics.hpp"
#include "hypolab/criterion.hpp"
#include "hypolab/initial_data.hpp"
#include "hypolab/solver.hpp"

namespace hypolab {

struct CertificateConfig {
  int ensemble_size = 16;
  int held_out = 8;
  std::uint64_t seed = 1;
  int max_k = 4;
  int max_m = 4;
  /// Add a bump aimed along the GCC minimizing ray to the ensemble.
  bool worst_ray_bump = true;
  /// Each run covers this many windows of length T*; λ is measured on every
  /// window, since each g(kT*) is admissible initial data as well.
  int windows = 2;
  /// Held-out runs cover this many windows.
  int held_out_windows = 3;
  double dt = 0.01;
  int record_every = 1;
};

struct DecayCertificate {
  bool issued = false;
  std::string reason;
  GccCertificate gcc;
  double t_star = 0.0;
  int ensemble_size = 0;
  std::vector<double> member_lambdas;  // max over windows, per member
  double lambda_ens = 0.0;
  DecayConstants constants;
  int held_out = 0;
  /// min over held-out runs and recorded times of 1 − ‖g_t‖/(C e^{−Λt}‖g_0‖).
  double held_out_margin = 0.0;
  bool held_out_pass = false;
  /// log(λ/(λ−1)) / (2T*): the norm rate that ‖g_{T*}‖² ≤ (1 − 1/λ)‖g_0‖²
  /// yields, half of Λ. The held-out margin is also reported at this rate.
  double energy_rate = 0.0;
  double held_out_margin_energy_rate = 0.0;

  std::string to_text() const;
};

/// Estimates λ on an ensemble of random band-limited data (plus the worst-ray
/// bump), issues (C, Λ) from the largest value and validates the bound on
/// fresh random data. No certificate is issued when sampled uniform GCC fails.
DecayCertificate end_to_end_certificate(const AbsorptionField& field, double t_star,
                                        const CertificateConfig& config,
                                        const GccSampling& sampling);

/// Fitted decay rates for zero-mass bumps centred at `center` with shrinking
/// widths (angular width 2π·width), fitted on the fixed window [t_lo, t_hi].
struct ConcentrationStudy {
  std::vector<double> widths;
  std::vector<DecayFit> fits;
  bool strictly_decreasing() const;
};

ConcentrationStudy concentration_study(const AbsorptionField& field, const PhasePoint& center,
                                       const std::vector<double>& widths, double t_lo, double t_hi,
                                       double dt);

}  // namespace hypolab
