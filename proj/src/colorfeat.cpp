#include "seedlab/colorfeat.hpp"

#include <cmath>
#include <vector>

namespace seedlab::color {

namespace {

struct MeanStd {
  double mean;
  double std;
};

// Shifted by the first value so a constant channel has an exact mean and a
// zero deviation.
MeanStd finish(const std::vector<double>& values) {
  const auto n = static_cast<double>(values.size());
  const double shift = values.front();
  double sum = 0.0;
  for (const double v : values) sum += v - shift;
  const double mean = shift + sum / n;
  double ss = 0.0;
  for (const double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / n)};
}

}  // namespace

const std::array<std::string_view, ColorFeatures::kCount>& ColorFeatures::names() {
  static const std::array<std::string_view, kCount> kNames = {
      "MeanRed",   "StDRed",   "SqrtMeanRed",   "MeanGreen", "StDGreen", "SqrtMeanGreen",
      "MeanBlue",  "StDBlue",  "SqrtMeanBlue",  "MeanRGB",   "MeanHue",  "StDHue",
      "MeanSat",   "StDSat",   "MeanVal",       "StDVal",
  };
  return kNames;
}

std::array<double, ColorFeatures::kCount> ColorFeatures::values() const {
  return {mean_r,   std_r,   sqrt_mean_r, mean_g,   std_g,   sqrt_mean_g,
          mean_b,   std_b,   sqrt_mean_b, mean_rgb, mean_hue, std_hue,
          mean_sat, std_sat, mean_val,    std_val};
}

ColorFeatures extract_color(const RgbRaster& img, const BinaryMask& mask) {
  if (!img.same_shape(mask)) {
    throw Error(ErrorKind::DimensionMismatch, "image and mask dimensions differ");
  }
  std::array<std::vector<double>, 6> channels;
  const auto px = img.pixels();
  const auto m = mask.pixels();
  for (std::size_t i = 0; i < px.size(); ++i) {
    if (m[i] != Pixel::Foreground) continue;
    const HsvPixel hsv = rgb_to_hsv(px[i]);
    const std::array<double, 6> v = {static_cast<double>(px[i].r), static_cast<double>(px[i].g),
                                     static_cast<double>(px[i].b), hsv.h, hsv.s, hsv.v};
    for (std::size_t c = 0; c < 6; ++c) channels[c].push_back(v[c]);
  }
  if (channels[0].empty()) throw Error(ErrorKind::EmptyRegion, "mask has no foreground pixels");

  std::array<MeanStd, 6> s;
  for (std::size_t c = 0; c < 6; ++c) s[c] = finish(channels[c]);

  ColorFeatures f;
  f.mean_r = s[0].mean;
  f.std_r = s[0].std;
  f.sqrt_mean_r = std::sqrt(f.mean_r);
  f.mean_g = s[1].mean;
  f.std_g = s[1].std;
  f.sqrt_mean_g = std::sqrt(f.mean_g);
  f.mean_b = s[2].mean;
  f.std_b = s[2].std;
  f.sqrt_mean_b = std::sqrt(f.mean_b);
  f.mean_rgb = (f.mean_r + f.mean_g + f.mean_b) / 3.0;
  f.mean_hue = s[3].mean;
  f.std_hue = s[3].std;
  f.mean_sat = s[4].mean;
  f.std_sat = s[4].std;
  f.mean_val = s[5].mean;
  f.std_val = s[5].std;
  return f;
}

}  // namespace seedlab::color
