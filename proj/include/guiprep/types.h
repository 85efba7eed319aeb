#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace guiprep {

// Screen resolution in pixels. Both dimensions are at least 1.
class ScreenSize {
 public:
  ScreenSize(int width, int height) : width_(width), height_(height) {
    if (width < 1 || height < 1) {
      throw std::invalid_argument("screen size must be positive, got " +
                                  std::to_string(width) + "x" +
                                  std::to_string(height));
    }
  }

  int width() const { return width_; }
  int height() const { return height_; }

  bool contains(int x, int y) const {
    return x >= 0 && y >= 0 && x < width_ && y < height_;
  }

  friend bool operator==(const ScreenSize&, const ScreenSize&) = default;

 private:
  int width_;
  int height_;
};

struct PixelPoint {
  int x = 0;
  int y = 0;
  friend bool operator==(const PixelPoint&, const PixelPoint&) = default;
};

// Resolution-independent point on the unit square, quantized to 0.001.
//
// Stored as integer thousandths so equality and serialization are exact.
class NormPoint {
 public:
  static constexpr int kScale = 1000;

  NormPoint() = default;

  // Throws std::out_of_range when either coordinate leaves [0, 1000].
  static NormPoint from_milli(int x_milli, int y_milli);

  // Rounds to the nearest 0.001 (half away from zero). Throws
  // std::out_of_range unless both inputs are in [0, 1].
  static NormPoint quantize(double x, double y);

  int x_milli() const { return x_; }
  int y_milli() const { return y_; }
  double x() const { return x_ / static_cast<double>(kScale); }
  double y() const { return y_ / static_cast<double>(kScale); }

  friend bool operator==(const NormPoint&, const NormPoint&) = default;

 private:
  NormPoint(int x, int y) : x_(x), y_(y) {}
  int x_ = 0;
  int y_ = 0;
};

// Inclusive pixel box; x1 <= x2 and y1 <= y2.
struct BBox {
  int x1 = 0;
  int y1 = 0;
  int x2 = 0;
  int y2 = 0;

  bool well_ordered() const { return x1 <= x2 && y1 <= y2; }
  bool within(const ScreenSize& s) const {
    return well_ordered() && s.contains(x1, y1) && s.contains(x2, y2);
  }

  friend bool operator==(const BBox&, const BBox&) = default;
};

// "0.347" style rendering of thousandths; used by every canonical writer.
std::string format_milli(int milli);

}  // namespace guiprep
