#pragma once

#include <string>
#include <variant>
#include <vector>

namespace hypolab {

/// The whole torus.
struct TorusShape {};

enum class Axis { horizontal, vertical };

/// Axis-aligned periodic band. A horizontal band is {|x₂ − center| < width/2}.
struct BandShape {
  Axis axis = Axis::horizontal;
  double center = 0.5;
  double width = 1.0 / 3.0;
};

/// Union of a horizontal and a vertical band of equal width through (cx, cy).
struct CrossShape {
  double cx = 0.5;
  double cy = 0.5;
  double width = 1.0 / 3.0;
};

struct DiskShape {
  double cx = 0.5;
  double cy = 0.5;
  double radius = 0.25;
};

struct RectangleShape {
  double cx = 0.5;
  double cy = 0.5;
  double width = 0.5;
  double height = 0.5;
};

using Shape = std::variant<TorusShape, BandShape, CrossShape, DiskShape, RectangleShape>;

/// Depth of a point inside a shape: the distance to the shape boundary for
/// interior points (exact for bands, disks, and rectangles; a lower bound near
/// the re-entrant corners of a cross), and ≤ 0 outside. Periodic in x.
double shape_depth(const Shape& shape, double x1, double x2) noexcept;

/// Largest depth attained inside the shape (half the smallest dimension).
double shape_max_depth(const Shape& shape) noexcept;

/// Smallest linear dimension: band or cross width, disk diameter, rectangle
/// short side; 1 for the whole torus.
double shape_min_dimension(const Shape& shape) noexcept;

double shape_area(const Shape& shape) noexcept;

bool shape_contains(const Shape& shape, double x1, double x2) noexcept;

/// Smooth primitive pieces of a shape; a cross splits into its two bands.
std::vector<Shape> shape_atoms(const Shape& shape);

/// Parses one shape from `name(a, b, ...)` text: torus(), hband(c, w),
/// vband(c, w), cross(cx, cy, w), disk(cx, cy, r), rect(cx, cy, w, h).
Shape parse_shape(const std::string& text);
std::string format_shape(const Shape& shape);

/// Σ as a finite union of primitive shapes; each entry is one component.
class SupportRegion {
 public:
  explicit SupportRegion(std::vector<Shape> components);

  const std::vector<Shape>& components() const noexcept { return components_; }
  std::size_t size() const noexcept { return components_.size(); }

  bool contains(double x1, double x2) const noexcept;
  double min_dimension() const noexcept;

  /// Parses components separated by ';'.
  static SupportRegion parse(const std::string& text);
  std::string format() const;

 private:
  std::vector<Shape> components_;
};

}  // namespace hypolab
