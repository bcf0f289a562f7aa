#include "seedlab/raster.hpp"

#include <algorithm>
#include <cmath>

namespace seedlab {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::DegenerateHistogram: return "DegenerateHistogram";
    case ErrorKind::DegenerateRegion: return "DegenerateRegion";
    case ErrorKind::EmptyRegion: return "EmptyRegion";
    case ErrorKind::NoValidPairs: return "NoValidPairs";
    case ErrorKind::SingleClassDataset: return "SingleClassDataset";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::UndefinedAuc: return "UndefinedAuc";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::EmptyMatrix: return "EmptyMatrix";
    case ErrorKind::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorKind::CorruptFile: return "CorruptFile";
    case ErrorKind::MalformedArff: return "MalformedArff";
    case ErrorKind::MissingClassAttribute: return "MissingClassAttribute";
    case ErrorKind::VersionUnsupported: return "VersionUnsupported";
    case ErrorKind::DigestMismatch: return "DigestMismatch";
    case ErrorKind::FeatureSchemaMismatch: return "FeatureSchemaMismatch";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

std::size_t foreground_count(const BinaryMask& mask) noexcept {
  const auto px = mask.pixels();
  return static_cast<std::size_t>(std::count(px.begin(), px.end(), Pixel::Foreground));
}

std::uint8_t luma(Rgb p) noexcept {
  const double y = 0.299 * p.r + 0.587 * p.g + 0.114 * p.b;
  return static_cast<std::uint8_t>(std::clamp(std::lround(y), 0L, 255L));
}

GrayRaster to_gray(const RgbRaster& img) {
  GrayRaster out(img.width(), img.height());
  std::ranges::transform(img.pixels(), out.pixels().begin(), luma);
  return out;
}

HsvPixel rgb_to_hsv(Rgb p) noexcept {
  const int hi = std::max({p.r, p.g, p.b});
  const int lo = std::min({p.r, p.g, p.b});
  const int delta = hi - lo;

  HsvPixel out;
  out.v = hi / 255.0;
  out.s = hi == 0 ? 0.0 : static_cast<double>(delta) / hi;
  if (delta == 0) {
    return out;
  }
  double sector;
  if (hi == p.r) {
    sector = static_cast<double>(p.g - p.b) / delta;
    if (sector < 0.0) sector += 6.0;
  } else if (hi == p.g) {
    sector = 2.0 + static_cast<double>(p.b - p.r) / delta;
  } else {
    sector = 4.0 + static_cast<double>(p.r - p.g) / delta;
  }
  out.h = sector / 6.0;
  if (out.h >= 1.0) out.h -= 1.0;
  return out;
}

Rgb hsv_to_rgb(const HsvPixel& p) noexcept {
  const double v = p.v * 255.0;
  const double c = v * p.s;
  const double sector = p.h * 6.0;
  const double x = c * (1.0 - std::abs(std::fmod(sector, 2.0) - 1.0));
  const double m = v - c;
  double r = 0, g = 0, b = 0;
  switch (static_cast<int>(sector) % 6) {
    case 0: r = c; g = x; break;
    case 1: r = x; g = c; break;
    case 2: g = c; b = x; break;
    case 3: g = x; b = c; break;
    case 4: r = x; b = c; break;
    default: r = c; b = x; break;
  }
  auto to8 = [](double value) {
    return static_cast<std::uint8_t>(std::clamp(std::lround(value), 0L, 255L));
  };
  return {to8(r + m), to8(g + m), to8(b + m)};
}

}  // namespace seedlab
