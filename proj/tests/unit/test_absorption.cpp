#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>

#include "hypolab/absorption.hpp"
#include "hypolab/region.hpp"

using namespace hypolab;

namespace {

double sigma_mass(const AbsorptionField& f) {
  double s = 0.0;
  for (double v : f.sigma().values()) s += v;
  return s * f.grid().dx() * f.grid().dx();
}

}  // namespace

TEST(Smoothstep, EndpointsAndSymmetry) {
  EXPECT_EQ(smoothstep(-1.0), 0.0);
  EXPECT_EQ(smoothstep(2.0), 1.0);
  EXPECT_DOUBLE_EQ(smoothstep(0.5), 0.5);
  EXPECT_NEAR(smoothstep(0.3) + smoothstep(0.7), 1.0, 1e-15);
  EXPECT_EQ(smoothstep_derivative(0.0), 0.0);
  EXPECT_DOUBLE_EQ(smoothstep_derivative(0.5), 1.5);
}

TEST(Region, ParseAndFormatRoundTrip) {
  const auto r = SupportRegion::parse("disk(0.25, 0.25, 0.2); hband(0.5, 0.25)");
  ASSERT_EQ(r.size(), 2u);
  const auto again = SupportRegion::parse(r.format());
  EXPECT_EQ(again.format(), r.format());
  EXPECT_TRUE(r.contains(0.3, 0.3));
  EXPECT_TRUE(r.contains(0.9, 0.55));
  EXPECT_FALSE(r.contains(0.75, 0.1));
}

TEST(Region, RejectsMalformedShapes) {
  EXPECT_THROW(parse_shape("disk(0.5, 0.5)"), std::invalid_argument);
  EXPECT_THROW(parse_shape("blob(1)"), std::invalid_argument);
  EXPECT_THROW(parse_shape("hband(0.5, 0"), std::invalid_argument);
  EXPECT_THROW(SupportRegion::parse(""), std::invalid_argument);
}

TEST(Region, CrossSplitsIntoTwoBands) {
  const auto atoms = shape_atoms(CrossShape{0.5, 0.5, 0.2});
  ASSERT_EQ(atoms.size(), 2u);
  EXPECT_TRUE(std::holds_alternative<BandShape>(atoms[0]));
  EXPECT_NEAR(shape_area(CrossShape{0.5, 0.5, 0.2}), 0.36, 1e-15);
}

TEST(BuildSigma, BandMassMatchesClosedForm) {
  // Across the band σ/A is S(depth/w) near the edges and 1 inside, so its
  // integral over the torus is W − 2w + 2w·∫₀¹S = W − w.
  const GridSpec g(256, 8);
  const double width = 1.0 / 3.0, w = 1.0 / 24.0, amp = 2.0;
  const auto f = build_sigma(g, SupportRegion({BandShape{Axis::horizontal, 0.5, width}}), w, amp);
  EXPECT_NEAR(sigma_mass(f), amp * (width - w), 1e-5);
  EXPECT_DOUBLE_EQ(f.sigma_sup(), amp);
  EXPECT_TRUE(f.certified());
}

TEST(BuildSigma, SupportAndControlNesting) {
  const GridSpec g(64, 8);
  const auto f = build_sigma(g, SupportRegion({CrossShape{0.5, 0.5, 1.0 / 3.0}}), 1.0 / 24.0, 1.0);
  const auto& support = f.support_mask();
  for (int i1 = 0; i1 < 64; ++i1)
    for (int i2 = 0; i2 < 64; ++i2) {
      const std::size_t s = g.site(i1, i2);
      if (f.sigma()(i1, i2) > 0.0) EXPECT_TRUE(support[s]);
      if (f.chi()(i1, i2) > 0.0) EXPECT_DOUBLE_EQ(f.sigma()(i1, i2), 1.0);
      EXPECT_GE(f.sigma()(i1, i2), 0.0);
    }
  EXPECT_LE(f.chi_sup(), f.kappa() * f.amplitude() + 1e-15);
  EXPECT_GT(f.grad_chi_sup(), 0.0);
}

TEST(BuildSigma, FullTorusIsConstant) {
  const GridSpec g(16, 8);
  const auto f = build_sigma(g, SupportRegion({TorusShape{}}), 0.1, 1.5);
  for (double v : f.sigma().values()) EXPECT_DOUBLE_EQ(v, 1.5);
  for (double v : f.chi().values()) EXPECT_DOUBLE_EQ(v, 1.0);
  EXPECT_EQ(f.grad_chi_sup(), 0.0);
  EXPECT_DOUBLE_EQ(f.support_area(), 1.0);
}

TEST(BuildSigma, RejectsBadParameters) {
  const GridSpec g(16, 8);
  const SupportRegion band({BandShape{Axis::horizontal, 0.5, 0.2}});
  EXPECT_THROW(build_sigma(g, band, 0.0, 1.0), std::invalid_argument);
  EXPECT_THROW(build_sigma(g, band, 0.15, 1.0), std::invalid_argument);
  EXPECT_THROW(build_sigma(g, band, 0.05, -1.0), std::invalid_argument);
}

TEST(BuildSigma, ChiGradientMatchesFiniteDifferences) {
  const GridSpec g(256, 8);
  const auto f = build_sigma(g, SupportRegion({DiskShape{0.5, 0.5, 0.3}}), 0.05, 1.0);
  double fd = 0.0;
  const int n = g.n_x();
  for (int i1 = 0; i1 < n; ++i1)
    for (int i2 = 0; i2 < n; ++i2) {
      const double g1 = (f.chi()((i1 + 1) % n, i2) - f.chi()((i1 + n - 1) % n, i2)) * 0.5 * n;
      const double g2 = (f.chi()(i1, (i2 + 1) % n) - f.chi()(i1, (i2 + n - 1) % n)) * 0.5 * n;
      fd = std::max(fd, std::hypot(g1, g2));
    }
  EXPECT_NEAR(f.grad_chi_sup(), fd, 0.02 * fd);
}

TEST(RawAbsorption, RejectsNegativeValues) {
  const GridSpec g(8, 8);
  std::vector<double> v(64, 1.0);
  v[5] = -0.1;
  EXPECT_THROW(absorption_from_raw(g, v), std::invalid_argument);
  v[5] = 0.0;
  const auto f = absorption_from_raw(g, v);
  EXPECT_FALSE(f.certified());
  EXPECT_FALSE(f.support_mask()[5]);
}
