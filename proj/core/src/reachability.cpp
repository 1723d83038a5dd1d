#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "hypolab/characteristics.hpp"
#include "hypolab/parallel.hpp"

namespace hypolab {
namespace {

bool strongly_connected(std::size_t k, const std::vector<double>& hit, double t) {
  std::vector<std::uint8_t> reach(k * k, 0);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) reach[i * k + j] = (i == j || hit[i * k + j] <= t);
  for (std::size_t m = 0; m < k; ++m)
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j)
        if (reach[i * k + m] && reach[m * k + j]) reach[i * k + j] = 1;
  return std::all_of(reach.begin(), reach.end(), [](auto v) { return v != 0; });
}

}  // namespace

bool ReachabilityReport::irreducible() const {
  std::vector<double> hit(components * components);
  for (std::size_t i = 0; i < hit.size(); ++i)
    hit[i] = reachable[i] ? 0.0 : std::numeric_limits<double>::infinity();
  return strongly_connected(components, hit, 0.0);
}

ReachabilityReport component_reachability(const SupportRegion& region, double t_star,
                                          const ReachabilitySampling& sampling) {
  if (!(t_star > 0.0)) throw std::invalid_argument("t_star must be positive");
  const auto& comps = region.components();
  const std::size_t k = comps.size();
  const int P = sampling.points_per_axis;
  const int A = sampling.angles;
  const int steps = std::max(1, static_cast<int>(std::ceil(t_star / sampling.dt_march)));
  const double h = t_star / steps;
  constexpr double inf = std::numeric_limits<double>::infinity();

  ReachabilityReport rep;
  rep.components = k;
  rep.t_star = t_star;
  rep.first_hit.assign(k * k, inf);

  for (std::size_t i = 0; i < k; ++i) {
    rep.first_hit[i * k + i] = 0.0;
    std::vector<std::pair<double, double>> starts;
    for (int p1 = 0; p1 < P; ++p1)
      for (int p2 = 0; p2 < P; ++p2) {
        const double x1 = (p1 + 0.5) / P;
        const double x2 = (p2 + 0.5) / P;
        if (shape_contains(comps[i], x1, x2)) starts.emplace_back(x1, x2);
      }
    if (starts.empty()) {
      // Component thinner than the lattice: fall back to a point at maximal depth.
      double best = -inf;
      std::pair<double, double> pick{0.0, 0.0};
      const int fine = 8 * P;
      for (int p1 = 0; p1 < fine; ++p1)
        for (int p2 = 0; p2 < fine; ++p2) {
          const double d = shape_depth(comps[i], (p1 + 0.5) / fine, (p2 + 0.5) / fine);
          if (d > best) best = d, pick = {(p1 + 0.5) / fine, (p2 + 0.5) / fine};
        }
      starts.push_back(pick);
    }

    std::vector<double> per_angle(static_cast<std::size_t>(A) * k, inf);
    parallel_for(static_cast<std::size_t>(A), [&](std::size_t a) {
      const double theta = kTwoPi * static_cast<double>(a) / A;
      const double c = std::cos(theta);
      const double s = std::sin(theta);
      double* best = per_angle.data() + a * k;
      for (const auto& [x1, x2] : starts) {
        for (int m = 1; m <= steps; ++m) {
          const double t = m * h;
          bool all_found = true;
          for (std::size_t j = 0; j < k; ++j) {
            if (j == i || best[j] <= t) continue;
            all_found = false;
            if (shape_contains(comps[j], x1 + t * c, x2 + t * s)) best[j] = t;
          }
          if (all_found) break;
        }
      }
    });
    for (int a = 0; a < A; ++a)
      for (std::size_t j = 0; j < k; ++j)
        rep.first_hit[i * k + j] =
            std::min(rep.first_hit[i * k + j], per_angle[static_cast<std::size_t>(a) * k + j]);
  }

  rep.reachable.assign(k * k, 0);
  for (std::size_t e = 0; e < k * k; ++e) rep.reachable[e] = rep.first_hit[e] <= t_star;

  std::vector<double> candidates;
  for (double v : rep.first_hit)
    if (std::isfinite(v)) candidates.push_back(v);
  std::sort(candidates.begin(), candidates.end());
  for (double t : candidates) {
    if (strongly_connected(k, rep.first_hit, t)) {
      rep.min_irreducible_t_star = t;
      break;
    }
  }
  return rep;
}

}  // namespace hypolab
