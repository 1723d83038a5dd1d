#include "hypolab/region.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "hypolab/grid.hpp"

namespace hypolab {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

double band_depth(const BandShape& b, double x1, double x2) noexcept {
  const double coord = b.axis == Axis::horizontal ? x2 : x1;
  return 0.5 * b.width - std::abs(periodic_delta(coord, b.center));
}

BandShape horizontal_of(const CrossShape& c) { return {Axis::horizontal, c.cy, c.width}; }
BandShape vertical_of(const CrossShape& c) { return {Axis::vertical, c.cx, c.width}; }

void validate(const Shape& shape) {
  std::visit(Overloaded{
                 [](const TorusShape&) {},
                 [](const BandShape& b) {
                   if (!(b.width > 0.0 && b.width < 1.0))
                     throw std::invalid_argument("band width must lie in (0, 1)");
                 },
                 [](const CrossShape& c) {
                   if (!(c.width > 0.0 && c.width < 1.0))
                     throw std::invalid_argument("cross width must lie in (0, 1)");
                 },
                 [](const DiskShape& d) {
                   if (!(d.radius > 0.0 && d.radius <= 0.5))
                     throw std::invalid_argument("disk radius must lie in (0, 1/2]");
                 },
                 [](const RectangleShape& r) {
                   if (!(r.width > 0.0 && r.width < 1.0 && r.height > 0.0 && r.height < 1.0))
                     throw std::invalid_argument("rectangle sides must lie in (0, 1)");
                 },
             },
             shape);
}

std::vector<double> parse_args(const std::string& inside) {
  std::vector<double> out;
  std::stringstream ss(inside);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto first = item.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item.substr(first), &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad shape argument '" + item + "'");
    }
    if (item.find_first_not_of(" \t", first + used) != std::string::npos)
      throw std::invalid_argument("bad shape argument '" + item + "'");
    out.push_back(v);
  }
  return out;
}

std::string trim(const std::string& s) {
  auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return {};
  auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

}  // namespace

double shape_depth(const Shape& shape, double x1, double x2) noexcept {
  return std::visit(
      Overloaded{
          [](const TorusShape&) { return std::numeric_limits<double>::infinity(); },
          [&](const BandShape& b) { return band_depth(b, x1, x2); },
          [&](const CrossShape& c) {
            return std::max(band_depth(horizontal_of(c), x1, x2),
                            band_depth(vertical_of(c), x1, x2));
          },
          [&](const DiskShape& d) {
            return d.radius - std::hypot(periodic_delta(x1, d.cx), periodic_delta(x2, d.cy));
          },
          [&](const RectangleShape& r) {
            return std::min(0.5 * r.width - std::abs(periodic_delta(x1, r.cx)),
                            0.5 * r.height - std::abs(periodic_delta(x2, r.cy)));
          },
      },
      shape);
}

double shape_max_depth(const Shape& shape) noexcept {
  return std::visit(Overloaded{
                        [](const TorusShape&) { return std::numeric_limits<double>::infinity(); },
                        [](const BandShape& b) { return 0.5 * b.width; },
                        [](const CrossShape& c) { return 0.5 * c.width; },
                        [](const DiskShape& d) { return d.radius; },
                        [](const RectangleShape& r) { return 0.5 * std::min(r.width, r.height); },
                    },
                    shape);
}

double shape_min_dimension(const Shape& shape) noexcept {
  return std::visit(Overloaded{
                        [](const TorusShape&) { return 1.0; },
                        [](const BandShape& b) { return b.width; },
                        [](const CrossShape& c) { return c.width; },
                        [](const DiskShape& d) { return 2.0 * d.radius; },
                        [](const RectangleShape& r) { return std::min(r.width, r.height); },
                    },
                    shape);
}

double shape_area(const Shape& shape) noexcept {
  return std::visit(Overloaded{
                        [](const TorusShape&) { return 1.0; },
                        [](const BandShape& b) { return b.width; },
                        [](const CrossShape& c) { return 2.0 * c.width - c.width * c.width; },
                        [](const DiskShape& d) { return kPi * d.radius * d.radius; },
                        [](const RectangleShape& r) { return r.width * r.height; },
                    },
                    shape);
}

bool shape_contains(const Shape& shape, double x1, double x2) noexcept {
  return shape_depth(shape, x1, x2) > 0.0;
}

std::vector<Shape> shape_atoms(const Shape& shape) {
  if (const auto* c = std::get_if<CrossShape>(&shape)) {
    return {horizontal_of(*c), vertical_of(*c)};
  }
  return {shape};
}

Shape parse_shape(const std::string& text) {
  const std::string t = trim(text);
  const auto open = t.find('(');
  const auto close = t.rfind(')');
  if (open == std::string::npos || close == std::string::npos || close < open ||
      close != t.size() - 1) {
    throw std::invalid_argument("malformed shape '" + t + "'");
  }
  const std::string name = trim(t.substr(0, open));
  const auto a = parse_args(t.substr(open + 1, close - open - 1));
  auto need = [&](std::size_t n) {
    if (a.size() != n)
      throw std::invalid_argument("shape '" + name + "' expects " + std::to_string(n) +
                                  " arguments");
  };
  Shape s;
  if (name == "torus") {
    need(0);
    s = TorusShape{};
  } else if (name == "hband") {
    need(2);
    s = BandShape{Axis::horizontal, a[0], a[1]};
  } else if (name == "vband") {
    need(2);
    s = BandShape{Axis::vertical, a[0], a[1]};
  } else if (name == "cross") {
    need(3);
    s = CrossShape{a[0], a[1], a[2]};
  } else if (name == "disk") {
    need(3);
    s = DiskShape{a[0], a[1], a[2]};
  } else if (name == "rect") {
    need(4);
    s = RectangleShape{a[0], a[1], a[2], a[3]};
  } else {
    throw std::invalid_argument("unknown shape '" + name + "'");
  }
  validate(s);
  return s;
}

std::string format_shape(const Shape& shape) {
  char buf[160];
  std::visit(Overloaded{
                 [&](const TorusShape&) { std::snprintf(buf, sizeof buf, "torus()"); },
                 [&](const BandShape& b) {
                   std::snprintf(buf, sizeof buf, "%s(%.17g, %.17g)",
                                 b.axis == Axis::horizontal ? "hband" : "vband", b.center, b.width);
                 },
                 [&](const CrossShape& c) {
                   std::snprintf(buf, sizeof buf, "cross(%.17g, %.17g, %.17g)", c.cx, c.cy,
                                 c.width);
                 },
                 [&](const DiskShape& d) {
                   std::snprintf(buf, sizeof buf, "disk(%.17g, %.17g, %.17g)", d.cx, d.cy,
                                 d.radius);
                 },
                 [&](const RectangleShape& r) {
                   std::snprintf(buf, sizeof buf, "rect(%.17g, %.17g, %.17g, %.17g)", r.cx, r.cy,
                                 r.width, r.height);
                 },
             },
             shape);
  return buf;
}

SupportRegion::SupportRegion(std::vector<Shape> components) : components_(std::move(components)) {
  if (components_.empty()) throw std::invalid_argument("support region has no components");
  for (const auto& c : components_) validate(c);
}

bool SupportRegion::contains(double x1, double x2) const noexcept {
  return std::any_of(components_.begin(), components_.end(),
                     [&](const Shape& s) { return shape_contains(s, x1, x2); });
}

double SupportRegion::min_dimension() const noexcept {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& c : components_) m = std::min(m, shape_min_dimension(c));
  return m;
}

SupportRegion SupportRegion::parse(const std::string& text) {
  std::vector<Shape> shapes;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ';')) {
    if (trim(item).empty()) continue;
    shapes.push_back(parse_shape(item));
  }
  return SupportRegion(std::move(shapes));
}

std::string SupportRegion::format() const {
  std::string out;
  for (std::size_t i = 0; i < components_.size(); ++i) {
    if (i) out += "; ";
    out += format_shape(components_[i]);
  }
  return out;
}

}  // namespace hypolab
