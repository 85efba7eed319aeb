#pragma once

#include <stdexcept>
#include <string>

#include "guiprep/types.h"

namespace guiprep {

// Point on the 0..1000 relative grid.
struct RelPoint {
  int x = 0;
  int y = 0;
  friend bool operator==(const RelPoint&, const RelPoint&) = default;
};

class OutOfBoundsError : public std::out_of_range {
 public:
  OutOfBoundsError(char axis, int value, int limit);
  char axis() const { return axis_; }

 private:
  char axis_;
};

// round(v / extent * 1000), half away from zero, clamped to [0, 1000].
// Throws OutOfBoundsError when the point is not inside the screen.
RelPoint to_relative(PixelPoint p, const ScreenSize& s);

NormPoint to_unit(RelPoint r);

NormPoint normalize_point(PixelPoint p, const ScreenSize& s);

// Inverse mapping, clamped to the last pixel so 1.0 lands on the screen.
PixelPoint denormalize(NormPoint n, const ScreenSize& s);

// Floor of the corner midpoint on each axis.
PixelPoint box_center(const BBox& b);

// Inclusive on all four edges.
bool point_in_box(NormPoint n, const BBox& b, const ScreenSize& s);

// Same-extent helper used when sources give boxes or points in relative
// or unit space: value * extent / scale, rounded, clamped to [0, extent-1].
int scale_to_pixel(double value, double scale, int extent);

}  // namespace guiprep
