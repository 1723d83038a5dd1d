#include "hypolab/bogovskii.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <stdexcept>

#include <boost/math/quadrature/gauss.hpp>

#include "hypolab/grid.hpp"
#include "hypolab/parallel.hpp"

namespace hypolab {

namespace {

// Directions for points inside the ball (periodic trapezoid) and Gauss
// nodes across the cone of directions that meet the ball from outside.
constexpr int kFullCircleAngles = 96;
// Simpson step along rays, in cells.
constexpr double kRayStep = 0.5;
using ConeRule = boost::math::quadrature::gauss<double, 40>;

int cells_along(double length, double h) {
  return std::max(1, static_cast<int>(std::lround(length / h)));
}

}  // namespace

StarDomain::StarDomain(DomainShape shape, double x0, double y0, double width, double height,
                       int cells, StarBall ball)
    : shape_(shape), x0_(x0), y0_(y0), width_(width), height_(height), ball_(ball) {
  if (cells < 4) throw std::invalid_argument("domain mesh needs at least 4 cells per side");
  if (!(width > 0.0) || !(height > 0.0)) throw std::invalid_argument("domain sizes must be positive");
  h_ = std::max(width, height) / cells;
  nx_ = cells_along(width, h_);
  ny_ = cells_along(height, h_);
  mask_.assign(this->cells(), 0);
  for (int j = 0; j < ny_; ++j)
    for (int i = 0; i < nx_; ++i) mask_[index(i, j)] = contains(x(i), y(j)) ? 1 : 0;
  // The ball must sit strictly inside.
  for (int k = 0; k < 64; ++k) {
    const double a = kTwoPi * k / 64;
    if (!contains(ball_.cx + ball_.radius * std::cos(a), ball_.cy + ball_.radius * std::sin(a))) {
      throw std::invalid_argument("star ball is not contained in the domain");
    }
  }
}

StarDomain StarDomain::disk(double radius, int cells) {
  return StarDomain(DomainShape::disk, -radius, -radius, 2 * radius, 2 * radius, cells,
                    {0.0, 0.0, 0.5 * radius});
}

StarDomain StarDomain::rectangle(double width, double height, int cells) {
  return StarDomain(DomainShape::rectangle, 0.0, 0.0, width, height, cells,
                    {0.5 * width, 0.5 * height, 0.4 * std::min(width, height)});
}

StarDomain StarDomain::l_shape(double side, int cells) {
  return StarDomain(DomainShape::l_shape, 0.0, 0.0, side, side, cells,
                    {0.25 * side, 0.25 * side, 0.2 * side});
}

bool StarDomain::contains(double px, double py) const noexcept {
  switch (shape_) {
    case DomainShape::disk: {
      const double r = 0.5 * width_;
      const double dx = px - (x0_ + r), dy = py - (y0_ + r);
      return dx * dx + dy * dy < r * r;
    }
    case DomainShape::rectangle:
      return px > x0_ && px < x0_ + width_ && py > y0_ && py < y0_ + height_;
    case DomainShape::l_shape: {
      if (!(px > x0_ && px < x0_ + width_ && py > y0_ && py < y0_ + height_)) return false;
      return !(px >= x0_ + 0.5 * width_ && py >= y0_ + 0.5 * height_);
    }
  }
  return false;
}

double StarDomain::area() const noexcept {
  return static_cast<double>(std::count(mask_.begin(), mask_.end(), std::uint8_t{1})) * h_ * h_;
}

bool StarDomain::star_property_holds(std::uint64_t seed, int pairs) const {
  std::vector<std::size_t> interior;
  for (std::size_t k = 0; k < mask_.size(); ++k)
    if (mask_[k]) interior.push_back(k);
  if (interior.empty()) return false;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, interior.size() - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int p = 0; p < pairs; ++p) {
    const std::size_t k = interior[pick(rng)];
    const double px = x(static_cast<int>(k % nx_));
    const double py = y(static_cast<int>(k / nx_));
    const double r = ball_.radius * std::sqrt(unit(rng));
    const double a = kTwoPi * unit(rng);
    const double bx = ball_.cx + r * std::cos(a), by = ball_.cy + r * std::sin(a);
    for (int s = 0; s <= 64; ++s) {
      const double t = s / 64.0;
      if (!contains(px + t * (bx - px), py + t * (by - py))) return false;
    }
  }
  return true;
}

std::string StarDomain::describe() const {
  const char* name = shape_ == DomainShape::disk        ? "disk"
                     : shape_ == DomainShape::rectangle ? "rectangle"
                                                        : "l-shape";
  char buf[200];
  std::snprintf(buf, sizeof buf, "%s %.4g x %.4g, mesh %d x %d, ball (%.4g, %.4g) r %.4g", name,
                width_, height_, nx_, ny_, ball_.cx, ball_.cy, ball_.radius);
  return buf;
}

BumpWeight::BumpWeight(const StarBall& ball)
    : BumpWeight(ball, 5.0 / (kPi * ball.radius * ball.radius)) {}

BumpWeight::BumpWeight(const StarBall& ball, double amplitude) : ball_(ball), amplitude_(amplitude) {
  if (!(ball.radius > 0.0)) throw std::invalid_argument("bump radius must be positive");
}

double BumpWeight::operator()(double x, double y) const noexcept {
  const double dx = x - ball_.cx, dy = y - ball_.cy;
  const double q = 1.0 - (dx * dx + dy * dy) / (ball_.radius * ball_.radius);
  if (q <= 0.0) return 0.0;
  const double q2 = q * q;
  return amplitude_ * q2 * q2;
}

double BumpWeight::mass() const noexcept {
  // ∫₀^R (1 − r²/R²)⁴ r dr = R²/10.
  return amplitude_ * kPi * ball_.radius * ball_.radius / 5.0;
}

double BumpWeight::radial_integral(double y1, double y2, double e1, double e2,
                                   double rho) const noexcept {
  const double a1 = y1 - ball_.cx, a2 = y2 - ball_.cy;
  const double R2 = ball_.radius * ball_.radius;
  const double beta = e1 * a1 + e2 * a2;
  const double D = beta * beta - (a1 * a1 + a2 * a2) + R2;
  if (D <= 0.0) return 0.0;
  const double root = std::sqrt(D);
  const double lo = std::max(rho + beta, -root);
  if (lo >= root) return 0.0;
  // With s = r + β the integrand is (D − s²)⁴ (s − β); P integrates (D − s²)⁴.
  const auto P = [D](double s) {
    const double s2 = s * s;
    return s * (D * D * D * D + s2 * (-4.0 * D * D * D / 3.0 +
                                      s2 * (6.0 * D * D / 5.0 + s2 * (-4.0 * D / 7.0 + s2 / 9.0))));
  };
  const double q = D - lo * lo;
  const double q2 = q * q;
  const double first = q2 * q2 * q / 10.0;
  const double second = beta * (P(root) - P(lo));
  const double R8 = R2 * R2 * R2 * R2;
  return amplitude_ / R8 * (first - second);
}

double BumpWeight::line_integral(double y1, double y2, double e1, double e2) const noexcept {
  const double a1 = y1 - ball_.cx, a2 = y2 - ball_.cy;
  const double R2 = ball_.radius * ball_.radius;
  const double beta = e1 * a1 + e2 * a2;
  const double D = beta * beta - (a1 * a1 + a2 * a2) + R2;
  if (D <= 0.0) return 0.0;
  const double root = std::sqrt(D);
  const double lo = std::max(beta, -root);
  if (lo >= root) return 0.0;
  const auto P = [D](double s) {
    const double s2 = s * s;
    return s * (D * D * D * D + s2 * (-4.0 * D * D * D / 3.0 +
                                      s2 * (6.0 * D * D / 5.0 + s2 * (-4.0 * D / 7.0 + s2 / 9.0))));
  };
  const double R8 = R2 * R2 * R2 * R2;
  return amplitude_ / R8 * (P(root) - P(lo));
}

std::vector<double> sample_on_domain(const StarDomain& domain,
                                     const std::function<double(double, double)>& h) {
  std::vector<double> out(domain.cells(), 0.0);
  for (int j = 0; j < domain.ny(); ++j)
    for (int i = 0; i < domain.nx(); ++i)
      if (domain.inside(i, j)) out[domain.index(i, j)] = h(domain.x(i), domain.y(j));
  return out;
}

std::vector<double> discrete_divergence(const StarDomain& domain, std::span<const double> f1,
                                        std::span<const double> f2) {
  std::vector<double> div(domain.cells(), 0.0);
  const double inv = 1.0 / (12.0 * domain.cell());
  auto at = [&](std::span<const double> f, int i, int j) {
    return domain.inside(i, j) ? f[domain.index(i, j)] : 0.0;
  };
  for (int j = 0; j < domain.ny(); ++j)
    for (int i = 0; i < domain.nx(); ++i) {
      if (!domain.inside(i, j)) continue;
      div[domain.index(i, j)] =
          inv * (8.0 * (at(f1, i + 1, j) - at(f1, i - 1, j) + at(f2, i, j + 1) - at(f2, i, j - 1)) -
                 (at(f1, i + 2, j) - at(f1, i - 2, j) + at(f2, i, j + 2) - at(f2, i, j - 2)));
    }
  return div;
}

DivergenceSolution bogovskii_solve(const StarDomain& domain, std::span<const double> h,
                                   const BumpWeight& weight) {
  if (h.size() != domain.cells()) throw std::invalid_argument("datum does not match the mesh");
  const double mass = weight.mass();
  if (std::abs(mass - 1.0) > 1e-8) throw std::invalid_argument("bump weight is not normalized");
  if (!domain.star_property_holds()) {
    throw std::invalid_argument("domain failed the star-shape spot check");
  }

  const double cell = domain.cell();
  const double area = cell * cell;
  DivergenceSolution sol;
  sol.h_input.assign(domain.cells(), 0.0);
  double total = 0.0;
  for (std::size_t k = 0; k < h.size(); ++k)
    if (domain.mask()[k]) total += h[k];
  sol.mean_correction = total * area / domain.area();
  for (std::size_t k = 0; k < h.size(); ++k)
    if (domain.mask()[k]) sol.h_input[k] = h[k] - sol.mean_correction;

  double h_sq = 0.0;
  for (double v : sol.h_input) h_sq += v * v;
  sol.h_norm = std::sqrt(h_sq * area);

  // Polar form about x: with y = x − ρe,
  //   F(x) = ∫ e [ b(e) ∫ h(x − ρe) dρ + a(e) ∫ h(x − ρe) ρ dρ ] dφ,
  // a = ∫₀^∞ ω(x + te) dt, b = ∫₀^∞ ω(x + te) t dt. The ray integrals of h use
  // cubic convolution between cell centres (h = 0 off the domain) and Simpson.
  const double x_lo = domain.x(0) - 0.5 * cell, y_lo = domain.y(0) - 0.5 * cell;
  const double x_hi = x_lo + domain.nx() * cell, y_hi = y_lo + domain.ny() * cell;
  auto sample = [&](int a, int b) { return domain.inside(a, b) ? sol.h_input[domain.index(a, b)] : 0.0; };
  auto keys = [](double t, std::array<double, 4>& w) {
    const double t2 = t * t, t3 = t2 * t;
    w[0] = -0.5 * t3 + t2 - 0.5 * t;
    w[1] = 1.5 * t3 - 2.5 * t2 + 1.0;
    w[2] = -1.5 * t3 + 2.0 * t2 + 0.5 * t;
    w[3] = 0.5 * t3 - 0.5 * t2;
  };
  auto h_at = [&](double x, double y) {
    const double u = (x - x_lo) / cell - 0.5, v = (y - y_lo) / cell - 0.5;
    const double fu = std::floor(u), fv = std::floor(v);
    const int i0 = static_cast<int>(fu), j0 = static_cast<int>(fv);
    if (i0 < -2 || j0 < -2 || i0 > domain.nx() || j0 > domain.ny()) return 0.0;
    std::array<double, 4> wu, wv;
    keys(u - fu, wu);
    keys(v - fv, wv);
    double out = 0.0;
    for (int b = 0; b < 4; ++b) {
      double row = 0.0;
      for (int a = 0; a < 4; ++a) row += wu[a] * sample(i0 - 1 + a, j0 - 1 + b);
      out += wv[b] * row;
    }
    return out;
  };
  // Distance from (x, y) along −e to where the interpolant's support ends.
  const double pad = 2.0 * cell;
  auto exit_length = [&](double x, double y, double e1, double e2) {
    double len = std::numeric_limits<double>::infinity();
    if (e1 > 1e-14) len = std::min(len, (x - (x_lo - pad)) / e1);
    if (e1 < -1e-14) len = std::min(len, ((x_hi + pad) - x) / -e1);
    if (e2 > 1e-14) len = std::min(len, (y - (y_lo - pad)) / e2);
    if (e2 < -1e-14) len = std::min(len, ((y_hi + pad) - y) / -e2);
    return len;
  };
  auto ray = [&](double x, double y, double e1, double e2, double coef0, double coef1) {
    const double len = exit_length(x, y, e1, e2);
    int n = std::max(2, static_cast<int>(std::ceil(len / (kRayStep * cell))));
    n += n % 2;
    const double step = len / n;
    double total = 0.0;
    for (int k = 0; k <= n; ++k) {
      const double rho = k * step;
      const double wk = (k == 0 || k == n) ? 1.0 : (k % 2 ? 4.0 : 2.0);
      total += wk * h_at(x - rho * e1, y - rho * e2) * (coef0 + coef1 * rho);
    }
    return total * step / 3.0;
  };

  const StarBall& ball = weight.ball();
  sol.f1.assign(domain.cells(), 0.0);
  sol.f2.assign(domain.cells(), 0.0);
  parallel_for(domain.cells(), [&](std::size_t k) {
    if (!domain.mask()[k]) return;
    const int i = static_cast<int>(k % domain.nx());
    const int j = static_cast<int>(k / domain.nx());
    const double px = domain.x(i), py = domain.y(j);
    double s1 = 0.0, s2 = 0.0;
    auto direction = [&](double phi, double w) {
      const double e1 = std::cos(phi), e2 = std::sin(phi);
      const double b = weight.radial_integral(px, py, e1, e2, 0.0);
      const double a = weight.line_integral(px, py, e1, e2);
      if (a == 0.0 && b == 0.0) return;
      const double v = w * ray(px, py, e1, e2, b, a);
      s1 += v * e1;
      s2 += v * e2;
    };
    const double dist = std::hypot(ball.cx - px, ball.cy - py);
    if (dist < ball.radius) {
      for (int a = 0; a < kFullCircleAngles; ++a) {
        direction(kTwoPi * a / kFullCircleAngles, kTwoPi / kFullCircleAngles);
      }
    } else {
      const double centre = std::atan2(ball.cy - py, ball.cx - px);
      const double half = std::asin(ball.radius / dist);
      const auto& nodes = ConeRule::abscissa();
      const auto& weights = ConeRule::weights();
      for (std::size_t g = 0; g < nodes.size(); ++g) {
        direction(centre + half * nodes[g], half * weights[g]);
        if (nodes[g] != 0.0) direction(centre - half * nodes[g], half * weights[g]);
      }
    }
    sol.f1[k] = s1;
    sol.f2[k] = s2;
  });

  const auto div = discrete_divergence(domain, sol.f1, sol.f2);
  double res = 0.0;
  for (std::size_t k = 0; k < div.size(); ++k) {
    if (!domain.mask()[k]) continue;
    const double d = div[k] - sol.h_input[k];
    res += d * d;
  }
  sol.divergence_residual = std::sqrt(res * area);

  double l2 = 0.0, grad = 0.0;
  auto value = [&](const std::vector<double>& f, int a, int b) {
    return domain.inside(a, b) ? f[domain.index(a, b)] : 0.0;
  };
  for (int b = 0; b < domain.ny(); ++b)
    for (int a = 0; a < domain.nx(); ++a) {
      if (!domain.inside(a, b)) continue;
      const std::size_t k = domain.index(a, b);
      l2 += sol.f1[k] * sol.f1[k] + sol.f2[k] * sol.f2[k];
      bool touches_boundary = false;
      const std::array<std::array<int, 2>, 4> nb{{{a + 1, b}, {a, b + 1}, {a - 1, b}, {a, b - 1}}};
      for (std::size_t n = 0; n < nb.size(); ++n) {
        const auto [na, nbb] = nb[n];
        const bool other_inside = domain.inside(na, nbb);
        if (!other_inside) touches_boundary = true;
        // Each interior edge once (from its lower-left cell); boundary edges once.
        if (other_inside && n >= 2) continue;
        for (const auto* f : {&sol.f1, &sol.f2}) {
          const double d = ((*f)[k] - value(*f, na, nbb)) / cell;
          grad += d * d;
        }
      }
      if (touches_boundary) {
        sol.boundary_max = std::max(sol.boundary_max, std::hypot(sol.f1[k], sol.f2[k]));
      }
    }
  sol.h1_norm = std::sqrt((l2 + grad) * area);
  sol.c_d_witness = sol.h_norm > 0.0 ? sol.h1_norm / sol.h_norm : 0.0;
  return sol;
}

double ManufacturedCase::divergence(double x, double y) const noexcept {
  const double dx = x - cx, dy = y - cy;
  const double r2 = radius * radius;
  const double q = 1.0 - (dx * dx + dy * dy) / r2;
  if (q <= 0.0) return 0.0;
  // ∇ψ = −8 q³ (x − c)/r².
  const double factor = -8.0 * q * q * q / r2;
  return factor * (a1 * dx + a2 * dy);
}

ManufacturedCase default_manufactured_case(const StarDomain& domain) {
  const StarBall& b = domain.ball();
  // Off-centre relative to the star ball so that F differs from G.
  return {b.cx + 0.3 * b.radius, b.cy - 0.2 * b.radius, 1.2 * b.radius, 1.0, 0.5};
}

std::vector<std::vector<double>> random_trig_ensemble(const StarDomain& domain, int members,
                                                      std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> phase(0.0, kTwoPi);
  std::vector<std::vector<double>> out;
  const double x0 = domain.x(0) - 0.5 * domain.cell();
  const double y0 = domain.y(0) - 0.5 * domain.cell();
  for (int m = 0; m < members; ++m) {
    struct Mode {
      int k1, k2;
      double amp, shift;
    };
    std::vector<Mode> modes;
    for (int k1 = 0; k1 <= 3; ++k1)
      for (int k2 = -3; k2 <= 3; ++k2) {
        if (k1 == 0 && k2 <= 0) continue;
        modes.push_back({k1, k2, normal(rng) / (1.0 + k1 * k1 + k2 * k2), phase(rng)});
      }
    out.push_back(sample_on_domain(domain, [&](double x, double y) {
      double s = 0.0;
      const double u = (x - x0) / domain.width(), v = (y - y0) / domain.height();
      for (const Mode& md : modes) s += md.amp * std::cos(kTwoPi * (md.k1 * u + md.k2 * v) + md.shift);
      return s;
    }));
  }
  return out;
}

CdEstimate estimate_c_d(const StarDomain& domain, std::span<const std::vector<double>> ensemble) {
  if (ensemble.size() < 8) throw std::invalid_argument("C_D estimate needs at least 8 members");
  const BumpWeight weight(domain.ball());
  CdEstimate est;
  for (const auto& h : ensemble) {
    if (h.size() != domain.cells()) throw std::invalid_argument("datum does not match the mesh");
    double sum = 0.0, sq = 0.0, count = 0.0;
    for (std::size_t k = 0; k < h.size(); ++k) {
      if (!domain.mask()[k]) continue;
      sum += h[k];
      sq += h[k] * h[k];
      count += 1.0;
    }
    // Norm left after mean correction, relative to the raw norm.
    const double centred = sq - sum * sum / count;
    if (!(sq > 0.0) || !(centred > 1e-20 * sq)) {
      throw std::invalid_argument("degenerate ensemble member");
    }
    const DivergenceSolution sol = bogovskii_solve(domain, h, weight);
    est.witnesses.push_back(sol.c_d_witness);
    est.c_d = std::max(est.c_d, sol.c_d_witness);
  }
  return est;
}

}  // namespace hypolab
