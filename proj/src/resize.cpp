#include "sameval/resize.hpp"

#include <algorithm>
#include <cmath>

namespace sameval {

GrayImage resize_bilinear(const GrayImage& src, int out_width, int out_height) {
  if (out_width < 1 || out_height < 1) {
    raise(ErrorKind::InvalidArgument, "resize target must be positive");
  }
  if (out_width == src.width() && out_height == src.height()) {
    return src;
  }

  const double scale_x = static_cast<double>(src.width()) / out_width;
  const double scale_y = static_cast<double>(src.height()) / out_height;
  std::vector<double> out(static_cast<std::size_t>(out_width) * out_height);
  const auto pixels = src.data();
  const int w = src.width();
  const int h = src.height();

  for (int oy = 0; oy < out_height; ++oy) {
    // Half-pixel centers; source coordinates clamped at the borders.
    const double sy = std::clamp((oy + 0.5) * scale_y - 0.5, 0.0, static_cast<double>(h - 1));
    const int y0 = static_cast<int>(sy);
    const int y1 = std::min(y0 + 1, h - 1);
    const double fy = sy - y0;
    for (int ox = 0; ox < out_width; ++ox) {
      const double sx = std::clamp((ox + 0.5) * scale_x - 0.5, 0.0, static_cast<double>(w - 1));
      const int x0 = static_cast<int>(sx);
      const int x1 = std::min(x0 + 1, w - 1);
      const double fx = sx - x0;
      const double top =
          pixels[static_cast<std::size_t>(y0) * w + x0] * (1.0 - fx) +
          pixels[static_cast<std::size_t>(y0) * w + x1] * fx;
      const double bottom =
          pixels[static_cast<std::size_t>(y1) * w + x0] * (1.0 - fx) +
          pixels[static_cast<std::size_t>(y1) * w + x1] * fx;
      double v = top * (1.0 - fy) + bottom * fy;
      // Interpolation cannot overshoot the input range, but guard rounding.
      out[static_cast<std::size_t>(oy) * out_width + ox] =
          std::clamp(v, 0.0, src.max_value());
    }
  }
  return GrayImage(out_width, out_height, std::move(out), src.max_value(), src.bit_depth_origin());
}

}  // namespace sameval
