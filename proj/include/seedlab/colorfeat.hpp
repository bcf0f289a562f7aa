#pragma once

#include <array>
#include <string_view>

#include "seedlab/raster.hpp"

namespace seedlab::color {

/// RGB statistics on the 0-255 scale, HSV statistics on 0-1. Standard
/// deviations are population values. Hue is averaged linearly on [0, 1), so
/// a class whose hues straddle pure red will see a distorted mean.
struct ColorFeatures {
  double mean_r = 0, std_r = 0, sqrt_mean_r = 0;
  double mean_g = 0, std_g = 0, sqrt_mean_g = 0;
  double mean_b = 0, std_b = 0, sqrt_mean_b = 0;
  double mean_rgb = 0;
  double mean_hue = 0, std_hue = 0;
  double mean_sat = 0, std_sat = 0;
  double mean_val = 0, std_val = 0;

  static constexpr std::size_t kCount = 16;
  static const std::array<std::string_view, kCount>& names();
  std::array<double, kCount> values() const;
};

/// Throws EmptyRegion when the mask selects nothing.
ColorFeatures extract_color(const RgbRaster& img, const BinaryMask& mask);

}  // namespace seedlab::color
