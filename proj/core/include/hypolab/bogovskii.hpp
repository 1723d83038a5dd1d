#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace hypolab {

/// Ball with respect to which a planar domain is star-shaped.
struct StarBall {
  double cx = 0.0;
  double cy = 0.0;
  double radius = 0.0;
};

enum class DomainShape { disk, rectangle, l_shape };

/// Planar domain on a uniform cell-centred mesh over its bounding box.
class StarDomain {
 public:
  /// Disk of the given radius centred at the origin; ball radius = radius/2.
  static StarDomain disk(double radius, int cells);
  /// [0, width] × [0, height]; centred ball of radius 0.4 × the short side.
  static StarDomain rectangle(double width, double height, int cells);
  /// [0, side]² minus [side/2, side]²; ball centred at (side/4, side/4) with
  /// radius 0.2 side.
  static StarDomain l_shape(double side, int cells);

  DomainShape shape() const noexcept { return shape_; }
  const StarBall& ball() const noexcept { return ball_; }
  double width() const noexcept { return width_; }
  double height() const noexcept { return height_; }

  int nx() const noexcept { return nx_; }
  int ny() const noexcept { return ny_; }
  double cell() const noexcept { return h_; }
  std::size_t cells() const noexcept { return static_cast<std::size_t>(nx_) * ny_; }
  std::size_t index(int i, int j) const noexcept {
    return static_cast<std::size_t>(j) * nx_ + static_cast<std::size_t>(i);
  }
  double x(int i) const noexcept { return x0_ + (i + 0.5) * h_; }
  double y(int j) const noexcept { return y0_ + (j + 0.5) * h_; }
  bool inside(int i, int j) const noexcept {
    return i >= 0 && j >= 0 && i < nx_ && j < ny_ && mask_[index(i, j)] != 0;
  }
  const std::vector<std::uint8_t>& mask() const noexcept { return mask_; }

  bool contains(double x, double y) const noexcept;
  /// Measure of the mesh approximation of the domain.
  double area() const noexcept;

  /// Spot-checks that segments from random interior cells to random points of
  /// the ball stay inside; false on the first violation.
  bool star_property_holds(std::uint64_t seed = 7, int pairs = 2000) const;

  std::string describe() const;

 private:
  StarDomain(DomainShape shape, double x0, double y0, double width, double height, int cells,
             StarBall ball);

  DomainShape shape_;
  double x0_, y0_, width_, height_;
  int nx_ = 0, ny_ = 0;
  double h_ = 0.0;
  StarBall ball_;
  std::vector<std::uint8_t> mask_;
};

/// ω(u) = A (1 − |u − c|²/R²)⁴ on the ball, A = 5/(πR²) for unit mass.
class BumpWeight {
 public:
  explicit BumpWeight(const StarBall& ball);
  BumpWeight(const StarBall& ball, double amplitude);

  double amplitude() const noexcept { return amplitude_; }
  double operator()(double x, double y) const noexcept;
  const StarBall& ball() const noexcept { return ball_; }
  double mass() const noexcept;

  /// ∫_ρ^∞ ω(y + r e) r dr in closed form, e a unit vector.
  double radial_integral(double y1, double y2, double e1, double e2, double rho) const noexcept;
  /// ∫₀^∞ ω(y + t e) dt in closed form.
  double line_integral(double y1, double y2, double e1, double e2) const noexcept;

 private:
  StarBall ball_;
  double amplitude_;
};

struct DivergenceSolution {
  std::vector<double> f1;
  std::vector<double> f2;
  std::vector<double> h_input;  // mean-corrected datum on the mesh (0 outside)
  double mean_correction = 0.0;
  double h_norm = 0.0;
  double divergence_residual = 0.0;  // ‖∇·F − h‖ over the domain cells
  double boundary_max = 0.0;         // max |F| on cells touching ∂U
  double h1_norm = 0.0;
  double c_d_witness = 0.0;
};

/// Samples h on the interior cells of the mesh.
std::vector<double> sample_on_domain(const StarDomain& domain,
                                     const std::function<double(double, double)>& h);

/// Right inverse of the divergence by kernel quadrature in polar coordinates
/// about each cell centre. The datum is mean-corrected first; F is zero
/// outside the domain.
DivergenceSolution bogovskii_solve(const StarDomain& domain, std::span<const double> h,
                                   const BumpWeight& weight);

/// Fourth-order central-difference divergence, F extended by 0.
std::vector<double> discrete_divergence(const StarDomain& domain, std::span<const double> f1,
                                        std::span<const double> f2);

/// Smooth compactly supported G on a disk inside the domain and h = ∇·G.
struct ManufacturedCase {
  double cx, cy, radius;
  double a1, a2;  // G = ψ (a1, a2), ψ = (1 − |x − c|²/r²)⁴
  double divergence(double x, double y) const noexcept;
};

ManufacturedCase default_manufactured_case(const StarDomain& domain);

/// Random trigonometric data on the bounding box (|k| ≤ 3), restricted to the domain.
std::vector<std::vector<double>> random_trig_ensemble(const StarDomain& domain, int members,
                                                      std::uint64_t seed);

struct CdEstimate {
  double c_d = 0.0;
  std::vector<double> witnesses;
};

/// Max of c_d_witness over the ensemble; needs at least 8 members, each with
/// nonzero norm after mean correction.
CdEstimate estimate_c_d(const StarDomain& domain, std::span<const std::vector<double>> ensemble);

}  // namespace hypolab
