#include "guiprep/geometry.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace guiprep {
namespace {

// round(num / den) for num >= 0, den > 0, ties away from zero.
std::int64_t round_div(std::int64_t num, std::int64_t den) {
  return (2 * num + den) / (2 * den);
}

int relative_axis(int v, int extent) {
  const auto r = round_div(static_cast<std::int64_t>(v) * NormPoint::kScale,
                           extent);
  return static_cast<int>(std::clamp<std::int64_t>(r, 0, NormPoint::kScale));
}

int pixel_axis(int milli, int extent) {
  const auto p = round_div(static_cast<std::int64_t>(milli) * extent,
                           NormPoint::kScale);
  return static_cast<int>(std::clamp<std::int64_t>(p, 0, extent - 1));
}

}  // namespace

OutOfBoundsError::OutOfBoundsError(char axis, int value, int limit)
    : std::out_of_range(std::string("point out of bounds on ") + axis +
                        " axis: " + std::to_string(value) + " not in [0, " +
                        std::to_string(limit) + ")"),
      axis_(axis) {}

RelPoint to_relative(PixelPoint p, const ScreenSize& s) {
  if (p.x < 0 || p.x >= s.width()) throw OutOfBoundsError('x', p.x, s.width());
  if (p.y < 0 || p.y >= s.height()) {
    throw OutOfBoundsError('y', p.y, s.height());
  }
  return {relative_axis(p.x, s.width()), relative_axis(p.y, s.height())};
}

NormPoint to_unit(RelPoint r) { return NormPoint::from_milli(r.x, r.y); }

NormPoint normalize_point(PixelPoint p, const ScreenSize& s) {
  return to_unit(to_relative(p, s));
}

PixelPoint denormalize(NormPoint n, const ScreenSize& s) {
  return {pixel_axis(n.x_milli(), s.width()),
          pixel_axis(n.y_milli(), s.height())};
}

PixelPoint box_center(const BBox& b) {
  // Corners are non-negative, so integer division is floor.
  return {(b.x1 + b.x2) / 2, (b.y1 + b.y2) / 2};
}

bool point_in_box(NormPoint n, const BBox& b, const ScreenSize& s) {
  const PixelPoint p = denormalize(n, s);
  return p.x >= b.x1 && p.x <= b.x2 && p.y >= b.y1 && p.y <= b.y2;
}

int scale_to_pixel(double value, double scale, int extent) {
  if (!std::isfinite(value)) throw std::invalid_argument("non-finite coordinate");
  const double px = std::round(value * extent / scale);
  return static_cast<int>(std::clamp(px, 0.0, static_cast<double>(extent - 1)));
}

}  // namespace guiprep
