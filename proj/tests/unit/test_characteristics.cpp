#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "hypolab/characteristics.hpp"
#include "hypolab/errors.hpp"

using namespace hypolab;

namespace {

AbsorptionField band_field(const GridSpec& g) {
  return build_sigma(g, SupportRegion({BandShape{Axis::horizontal, 0.5, 1.0 / 3.0}}), 1.0 / 24.0,
                     1.0);
}

AbsorptionField cross_field(const GridSpec& g) {
  return build_sigma(g, SupportRegion({CrossShape{0.5, 0.5, 1.0 / 3.0}}), 1.0 / 24.0, 1.0);
}

}  // namespace

TEST(Flow, StraightLinesModuloOne) {
  const PhasePoint z(0.9, 0.2, 0.25 * kPi);
  const PhasePoint w = flow(z, std::sqrt(2.0) * 0.3);
  EXPECT_NEAR(w.x1(), 0.2, 1e-14);
  EXPECT_NEAR(w.x2(), 0.5, 1e-14);
  EXPECT_DOUBLE_EQ(w.theta(), z.theta());
  const PhasePoint back = flow(w, -std::sqrt(2.0) * 0.3);
  EXPECT_LT(phase_distance(back, z), 1e-14);
}

TEST(LineIntegral, ConstantWeightIsLength) {
  const GridSpec g(16, 8);
  const auto f = build_sigma(g, SupportRegion({TorusShape{}}), 0.1, 0.7);
  EXPECT_NEAR(line_integral(f, PhasePoint(0.3, 0.1, 1.0), 2.5, 0.01), 0.7 * 2.5, 1e-13);
}

TEST(LineIntegral, VerticalRayThroughBand) {
  // One vertical period collects the band profile mass W − w.
  const GridSpec g(128, 8);
  const auto f = band_field(g);
  const double got = line_integral(f, PhasePoint(0.2, 0.0, 0.5 * kPi), 2.0, 1e-3);
  EXPECT_NEAR(got, 2.0 * (1.0 / 3.0 - 1.0 / 24.0), 2e-3);
}

TEST(Gcc, UniformGivesHorizon) {
  const GridSpec g(16, 8);
  const auto f = build_sigma(g, SupportRegion({TorusShape{}}), 0.1, 1.0);
  const auto cert = certify_gcc(f, 2.0, default_gcc_sampling(f));
  EXPECT_DOUBLE_EQ(cert.c_min, 2.0);
  EXPECT_TRUE(cert.uniform_certified());
  EXPECT_EQ(cert.trapped_fraction, 0.0);
}

TEST(Gcc, BandTrapsHorizontalRays) {
  const GridSpec g(32, 16);
  const auto f = band_field(g);
  const auto cert = certify_gcc(f, 4.0, default_gcc_sampling(f));
  EXPECT_EQ(cert.c_min, 0.0);
  EXPECT_FALSE(cert.uniform_certified());
  const double t = cert.worst_point.theta();
  EXPECT_TRUE(std::abs(std::sin(t)) < 1e-12) << t;
  EXPECT_GT(cert.trapped_fraction, 0.0);
  EXPECT_NE(cert.to_text().find("not certified"), std::string::npos);
}

TEST(Gcc, CrossIsCertified) {
  const GridSpec g(32, 16);
  const auto f = cross_field(g);
  const auto cert = certify_gcc(f, 2.0, default_gcc_sampling(f));
  EXPECT_GT(cert.c_min, 0.0);
  EXPECT_TRUE(cert.uniform_certified());
}

TEST(ControlWeight, NormalizationHitsMargin) {
  const GridSpec g(32, 16);
  const auto f = cross_field(g);
  const auto sampling = default_gcc_sampling(f);
  const auto nc = normalize_chi(f, 2.0, sampling);
  EXPECT_NEAR(nc.chi_certificate.c_min, 1.001, 1e-12);
  EXPECT_NEAR(nc.field.chi_sup(), nc.scale * f.chi_sup(), 1e-12);
  EXPECT_THROW(normalize_chi(band_field(g), 2.0, sampling), NumericalError);
}

TEST(ControlWeight, AverageAlongFlowIsOne) {
  const GridSpec g(32, 16);
  const auto base = cross_field(g);
  const auto nc = normalize_chi(base, 2.0, default_gcc_sampling(base));
  const double dt_quad = 0.01;
  const ControlWeight psi = build_psi(nc.field, 2.0, 5, dt_quad);
  EXPECT_GE(psi.min_denominator(), 0.5);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 50; ++k) {
    const PhasePoint z(u(rng), u(rng), kTwoPi * u(rng));
    EXPECT_NEAR(psi.average_along_flow(z), 1.0, 1e-12);
  }
  // Tabulated values agree with per-query evaluation at grid nodes.
  const PhasePoint node(g.x(10), g.x(16), g.theta(3));
  EXPECT_NEAR(psi.slice(2)[g.index(10, 16, 3)], psi.evaluate(psi.time(2), node), 1e-14);
}

TEST(Reachability, TwoDisksConnectAtLongHorizon) {
  const SupportRegion two({DiskShape{0.25, 0.25, 0.2}, DiskShape{0.75, 0.75, 0.2}});
  const auto r = component_reachability(two, 2.0, {24, 32, 2e-3});
  EXPECT_EQ(r.components, 2u);
  EXPECT_TRUE(r.at(0, 1));
  EXPECT_TRUE(r.at(1, 0));
  EXPECT_TRUE(r.irreducible());
  ASSERT_TRUE(r.min_irreducible_t_star.has_value());
  EXPECT_LT(*r.min_irreducible_t_star, 0.5);
}
