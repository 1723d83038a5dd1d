#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>

#include "hypolab/criterion.hpp"
#include "hypolab/initial_data.hpp"
#include "hypolab/solver.hpp"

using namespace hypolab;

namespace {

AbsorptionField constant_sigma(const GridSpec& g, double s) {
  return absorption_from_raw(g, std::vector<double>(g.sites(), s));
}

AbsorptionField cross_field(const GridSpec& g) {
  return build_sigma(g, SupportRegion({CrossShape{0.5, 0.5, 1.0 / 3.0}}), 1.0 / 24.0, 1.0);
}

EvolveResult run(const DensityField& f0, const AbsorptionField& field, double t_end,
                 double dt = 0.02) {
  SolverConfig c;
  c.dt = dt;
  c.t_end = t_end;
  c.zero_mass = true;
  return evolve(f0, field, c);
}

}  // namespace

TEST(DecayFromLambda, Examples) {
  const auto a = decay_from_lambda(2.0, 1.0);
  EXPECT_NEAR(a.big_c, std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(a.big_lambda, std::log(2.0), 1e-15);
  const auto b = decay_from_lambda(1.01, 1.0);
  EXPECT_NEAR(b.big_c, std::sqrt(101.0), 1e-12);
  EXPECT_NEAR(b.big_lambda, std::log(101.0), 1e-12);
  const auto c = decay_from_lambda(1e12, 1.0);
  EXPECT_NEAR(c.big_c, 1.0, 1e-11);
  EXPECT_GT(c.big_lambda, 0.0);
  EXPECT_LT(c.big_lambda, 1e-11);
  EXPECT_THROW(decay_from_lambda(1.0, 1.0), std::domain_error);
  EXPECT_THROW(decay_from_lambda(0.5, 1.0), std::domain_error);
}

TEST(DecayFromLambda, StrictlyMonotone) {
  for (double l1 : {1.001, 1.5, 2.0, 7.0, 100.0}) {
    const double l2 = l1 * 1.3;
    const auto a = decay_from_lambda(l1, 2.0), b = decay_from_lambda(l2, 2.0);
    EXPECT_GT(a.big_lambda, b.big_lambda);
    EXPECT_GT(a.big_c, b.big_c);
  }
}

TEST(FollowingConstants, Formula) {
  const auto c = following_constants(1.0, 1.0, 1.0, 0.0, 1.0);
  EXPECT_DOUBLE_EQ(c.c1, 8.0);
  EXPECT_NEAR(c.c2, 2.0 / kPi, 1e-15);
  // Independent re-evaluation with nonzero gradient.
  const double cp = 1.0, t = 2.0, chi = 0.37, grad = 5.5, sig = 1.2;
  const auto d = following_constants(cp, t, chi, grad, sig);
  EXPECT_NEAR(d.c1, 4 * cp * chi + 4 * t * chi + 4 * t * t * t * grad * grad * sig, 1e-12);
  const auto e = following_constants(cp, 2 * t, chi, grad, sig);
  const double cubic_share = 4 * t * t * t * grad * grad * sig;
  EXPECT_GE(e.c1 - d.c1, 7.0 * cubic_share);
}

TEST(EnergyLedger, HoldsOnEveryRun) {
  const GridSpec g(32, 16);
  for (std::uint64_t seed : {1u, 2u}) {
    const auto r = run(make_initial_data(g, RandomBandLimitedData{seed, 3, 3, 1.0}), cross_field(g), 2.0);
    const auto row = energy_ledger(r.samples);
    EXPECT_EQ(row.status, RowStatus::pass) << row.lhs << ' ' << row.rhs;
    EXPECT_NEAR(row.lhs, row.rhs, 1e-10 * row.lhs);
    const auto mass_row = mass_conservation(r.samples);
    EXPECT_EQ(mass_row.status, RowStatus::pass) << mass_row.lhs << ' ' << mass_row.rhs << ' ' << mass_row.tolerance;
    EXPECT_EQ(norm_monotonicity(r.samples).status, RowStatus::pass);
  }
}

TEST(EnergyLedger, FactorTwoBetweenNormDropAndFunctional) {
  const GridSpec g(32, 16);
  const auto r = run(make_initial_data(g, RandomBandLimitedData{5, 3, 3, 1.0}), cross_field(g), 1.0, 0.005);
  const auto row = dissipation_factor(r.samples);
  EXPECT_NEAR(row.lhs / row.rhs, 2.0, 1e-3);
}

TEST(MeasureLambda, VacuousWithoutAbsorption) {
  const GridSpec g(16, 8);
  const auto r = run(make_initial_data(g, RandomBandLimitedData{1, 3, 3, 1.0}), constant_sigma(g, 0.0), 1.0);
  const auto m = measure_lambda(r.samples, 1.0);
  EXPECT_TRUE(m.vacuous);
  EXPECT_EQ(verify_sufficient(r.samples, 2.0, 1.0).status, RowStatus::vacuous);
}

TEST(MeasureLambda, UniformAbsorptionAndNormDrop) {
  const GridSpec g(16, 16);
  const auto r = run(make_initial_data(g, SingleModeData{0.2, 1, 0}), constant_sigma(g, 1.0), 5.0);
  const auto m = measure_lambda(r.samples, 5.0);
  EXPECT_FALSE(m.vacuous);
  EXPECT_GT(m.lambda, 1.0);
  EXPECT_TRUE(std::isfinite(m.lambda));
  EXPECT_NEAR(r.samples.front().l2_sq - r.samples.back().l2_sq, m.dissipation_integral,
              1e-12 * m.initial_l2_sq);
}

TEST(MeasureLambda, ScaleInvariant) {
  const GridSpec g(16, 16);
  const auto field = cross_field(g);
  const auto f0 = make_initial_data(g, RandomBandLimitedData{7, 3, 3, 1.0});
  const double base = measure_lambda(run(f0, field, 2.0).samples, 2.0).lambda;
  for (double a : {0.5, 2.0, 10.0}) {
    const double scaled = measure_lambda(run(a * f0, field, 2.0).samples, 2.0).lambda;
    EXPECT_NEAR(scaled / base, 1.0, 1e-10);
  }
}

TEST(Following, HoldsOnUniformAbsorption) {
  const GridSpec g(16, 16);
  const auto field = constant_sigma(g, 1.0);
  const auto f0 = make_initial_data(g, RandomBandLimitedData{3, 3, 3, 1.0});
  const auto r = run(f0, field, 4.0);
  // Full torus: χ ≡ 1/T* (1 + margin) after normalization, no gradient.
  const double chi = 1.001 / 2.0;
  const auto c = following_constants(1.0, 2.0, chi, 0.0, 1.0);
  const auto row = verify_following(r.samples, c, 2.0);
  EXPECT_EQ(row.status, RowStatus::pass);
  EXPECT_GT(row.rhs, row.lhs);
  EXPECT_EQ(verify_following_windows(r.samples, c, 2.0).status, RowStatus::pass);
}

TEST(Following, ZeroDataPasses) {
  const GridSpec g(8, 8);
  const auto r = run(DensityField(g), constant_sigma(g, 1.0), 1.0, 0.1);
  const auto row = verify_following(r.samples, following_constants(1, 1, 1, 0, 1), 1.0);
  EXPECT_EQ(row.lhs, 0.0);
  EXPECT_EQ(row.rhs, 0.0);
  EXPECT_EQ(row.status, RowStatus::pass);
}

TEST(Quant, CauchySchwarzThreshold) {
  const GridSpec g(16, 16);
  const auto r = run(make_initial_data(g, RandomBandLimitedData{4, 3, 3, 1.0}), cross_field(g), 2.0);
  EXPECT_EQ(verify_quant(r.samples, 2.0, kTwoPi).c_delta, 0.0);
  EXPECT_EQ(verify_quant(r.samples, 2.0, 10.0).c_delta, 0.0);
  const auto q = verify_quant(r.samples, 2.0, 0.01);
  EXPECT_GT(q.c_delta, 0.0);
  EXPECT_TRUE(std::isfinite(q.c_delta));
  EXPECT_NEAR(q.density_integral, q.c_delta * q.dissipation_integral + 0.01 * q.norm_integral,
              1e-12 * q.density_integral);
}

TEST(Quant, ZeroData) {
  const GridSpec g(8, 8);
  const auto r = run(DensityField(g), constant_sigma(g, 1.0), 1.0, 0.1);
  const auto q = verify_quant(r.samples, 1.0, 0.1);
  EXPECT_EQ(q.density_integral, 0.0);
  EXPECT_EQ(q.c_delta, 0.0);
}

TEST(Rows, FormatIsAligned) {
  std::vector<InequalityRow> rows{{"a", 1.0, 2.0, 0.0, RowStatus::pass, ""},
                                  {"longer name", 3.0, 2.0, 1e-8, RowStatus::fail, "x"}};
  const std::string text = format_rows(rows);
  EXPECT_NE(text.find("FAIL"), std::string::npos);
  EXPECT_NE(text.find("longer name"), std::string::npos);
}
