#include "guiprep/types.h"

#include <cmath>
#include <cstdio>

namespace guiprep {

NormPoint NormPoint::from_milli(int x_milli, int y_milli) {
  if (x_milli < 0 || x_milli > kScale || y_milli < 0 || y_milli > kScale) {
    throw std::out_of_range("normalized point outside [0,1]: (" +
                            format_milli(x_milli) + ", " +
                            format_milli(y_milli) + ")");
  }
  return NormPoint(x_milli, y_milli);
}

NormPoint NormPoint::quantize(double x, double y) {
  if (!(x >= 0.0 && x <= 1.0 && y >= 0.0 && y <= 1.0)) {
    throw std::out_of_range("normalized point outside [0,1]");
  }
  // std::round is half away from zero.
  return NormPoint(static_cast<int>(std::round(x * kScale)),
                   static_cast<int>(std::round(y * kScale)));
}

std::string format_milli(int milli) {
  char buf[32];
  const char* sign = milli < 0 ? "-" : "";
  const unsigned magnitude =
      milli < 0 ? 0u - static_cast<unsigned>(milli) : static_cast<unsigned>(milli);
  std::snprintf(buf, sizeof(buf), "%s%u.%03u", sign, magnitude / 1000,
                magnitude % 1000);
  return buf;
}

}  // namespace guiprep
