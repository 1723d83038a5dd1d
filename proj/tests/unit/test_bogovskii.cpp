#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>

#include "hypolab/bogovskii.hpp"
#include "hypolab/grid.hpp"

using namespace hypolab;

namespace {

// Reference for the radial weight integral: composite Simpson on a fine grid.
double radial_reference(const BumpWeight& w, double y1, double y2, double e1, double e2,
                        double rho, double r_max) {
  const int n = 20000;
  const double h = (r_max - rho) / n;
  double s = 0.0;
  for (int k = 0; k <= n; ++k) {
    const double r = rho + k * h;
    const double c = (k == 0 || k == n) ? 1.0 : (k % 2 ? 4.0 : 2.0);
    s += c * w(y1 + r * e1, y2 + r * e2) * r;
  }
  return s * h / 3.0;
}

}  // namespace

TEST(BumpWeight, UnitMass) {
  const BumpWeight w({0.3, -0.2, 0.25});
  EXPECT_NEAR(w.mass(), 1.0, 1e-14);
  // Independent polar Simpson quadrature of the profile.
  EXPECT_NEAR(kTwoPi * radial_reference(w, 0.3, -0.2, 1.0, 0.0, 0.0, 0.25), 1.0, 1e-10);
  EXPECT_GT(w(0.3, -0.2), 0.0);
  EXPECT_EQ(w(0.3 + 0.26, -0.2), 0.0);
}

TEST(BumpWeight, RadialIntegralMatchesQuadrature) {
  const BumpWeight w({0.0, 0.0, 0.5});
  struct Case {
    double y1, y2, angle, rho;
  };
  for (const Case c : {Case{0.0, 0.0, 0.3, 0.0}, Case{-0.8, 0.1, 0.05, 0.2}, Case{0.2, 0.3, 2.0, 0.1},
                       Case{0.1, -0.1, 4.0, 0.6}, Case{0.9, 0.9, 0.0, 0.0}}) {
    const double e1 = std::cos(c.angle), e2 = std::sin(c.angle);
    const double got = w.radial_integral(c.y1, c.y2, e1, e2, c.rho);
    const double want = radial_reference(w, c.y1, c.y2, e1, e2, c.rho, c.rho + 3.0);
    EXPECT_NEAR(got, want, 1e-9 * std::max(1.0, std::abs(want))) << c.y1 << ' ' << c.angle;
  }
}

TEST(BumpWeight, LineIntegralMatchesQuadrature) {
  const BumpWeight w({0.1, 0.2, 0.4});
  for (const double angle : {0.0, 0.7, 2.5, 4.0}) {
    for (const auto& [y1, y2] : {std::pair{0.1, 0.2}, std::pair{-0.5, 0.0}, std::pair{0.3, 0.5}}) {
      const double e1 = std::cos(angle), e2 = std::sin(angle);
      const int n = 20000;
      const double len = 2.0, h = len / n;
      double want = 0.0;
      for (int k = 0; k <= n; ++k) {
        const double c = (k == 0 || k == n) ? 1.0 : (k % 2 ? 4.0 : 2.0);
        want += c * w(y1 + k * h * e1, y2 + k * h * e2);
      }
      want *= h / 3.0;
      EXPECT_NEAR(w.line_integral(y1, y2, e1, e2), want, 1e-8 * std::max(1.0, want)) << angle;
    }
  }
}

TEST(StarDomain, ShapesAndStarProperty) {
  const auto disk = StarDomain::disk(1.0, 32);
  EXPECT_NEAR(disk.area(), kPi, 0.05);
  EXPECT_TRUE(disk.star_property_holds());
  const auto thin = StarDomain::rectangle(1.0, 0.125, 64);
  EXPECT_EQ(thin.nx(), 64);
  EXPECT_EQ(thin.ny(), 8);
  EXPECT_TRUE(thin.star_property_holds());
  const auto l = StarDomain::l_shape(1.0, 32);
  EXPECT_NEAR(l.area(), 0.75, 1e-12);
  EXPECT_FALSE(l.contains(0.75, 0.75));
  EXPECT_TRUE(l.star_property_holds());
}

TEST(Bogovskii, ZeroDatumGivesZeroField) {
  const auto d = StarDomain::disk(1.0, 16);
  const auto sol = bogovskii_solve(d, std::vector<double>(d.cells(), 0.0), BumpWeight(d.ball()));
  for (double v : sol.f1) EXPECT_EQ(v, 0.0);
  for (double v : sol.f2) EXPECT_EQ(v, 0.0);
  EXPECT_EQ(sol.c_d_witness, 0.0);
}

TEST(Bogovskii, RejectsUnnormalizedWeight) {
  const auto d = StarDomain::disk(1.0, 16);
  const BumpWeight bad(d.ball(), 1.0);
  EXPECT_THROW(bogovskii_solve(d, std::vector<double>(d.cells(), 0.0), bad), std::invalid_argument);
}

TEST(Bogovskii, ManufacturedCaseConverges) {
  auto residual = [](int n) {
    const auto d = StarDomain::disk(1.0, n);
    const auto mc = default_manufactured_case(d);
    const auto h = sample_on_domain(d, [&](double x, double y) { return mc.divergence(x, y); });
    const auto sol = bogovskii_solve(d, h, BumpWeight(d.ball()));
    return sol.divergence_residual / sol.h_norm;
  };
  const double coarse = residual(24), fine = residual(48);
  EXPECT_LT(fine, 0.6 * coarse);
  EXPECT_LT(fine, 5e-3);
}

TEST(Bogovskii, Linearity) {
  const auto d = StarDomain::l_shape(1.0, 20);
  const auto ens = random_trig_ensemble(d, 2, 3);
  const BumpWeight w(d.ball());
  std::vector<double> combo(d.cells());
  for (std::size_t k = 0; k < combo.size(); ++k) combo[k] = 2.0 * ens[0][k] - 0.5 * ens[1][k];
  const auto a = bogovskii_solve(d, ens[0], w), b = bogovskii_solve(d, ens[1], w);
  const auto c = bogovskii_solve(d, combo, w);
  for (std::size_t k = 0; k < combo.size(); ++k) {
    EXPECT_NEAR(c.f1[k], 2.0 * a.f1[k] - 0.5 * b.f1[k], 1e-12);
    EXPECT_NEAR(c.f2[k], 2.0 * a.f2[k] - 0.5 * b.f2[k], 1e-12);
  }
}

TEST(Bogovskii, EstimateNeedsEnoughNonzeroMembers) {
  const auto d = StarDomain::rectangle(1.0, 1.0, 12);
  std::vector<std::vector<double>> few(3, std::vector<double>(d.cells(), 1.0));
  EXPECT_THROW(estimate_c_d(d, few), std::invalid_argument);
  // Constants vanish after mean correction.
  std::vector<std::vector<double>> flat(8, std::vector<double>(d.cells(), 1.0));
  EXPECT_THROW(estimate_c_d(d, flat), std::invalid_argument);
}
