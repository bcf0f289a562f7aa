#include "seedlab/texturefeat.hpp"

#include <cmath>

namespace seedlab::texture {

namespace {

void check_shapes(const GrayRaster& gray, const BinaryMask& mask) {
  if (!gray.same_shape(mask)) {
    throw Error(ErrorKind::DimensionMismatch, "gray image and mask dimensions differ");
  }
}

}  // namespace

GrayHistogram masked_histogram(const GrayRaster& gray, const BinaryMask& mask) {
  check_shapes(gray, mask);
  GrayHistogram h;
  const auto g = gray.pixels();
  const auto m = mask.pixels();
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (m[i] == Pixel::Foreground) ++h.bins[g[i]];
  }
  for (const auto c : h.bins) h.total += c;
  if (h.total == 0) throw Error(ErrorKind::EmptyRegion, "mask has no foreground pixels");
  return h;
}

FirstOrderStats first_order_stats(const GrayRaster& gray, const BinaryMask& mask) {
  return first_order_stats(masked_histogram(gray, mask));
}

FirstOrderStats first_order_stats(const GrayHistogram& hist) {
  if (hist.total == 0) throw Error(ErrorKind::EmptyRegion, "empty histogram");
  FirstOrderStats s;
  const auto n = static_cast<double>(hist.total);

  int lo = 255;
  int hi = 0;
  double sum = 0.0;
  std::uint64_t mode_count = 0;
  for (int g = 0; g < 256; ++g) {
    const auto c = hist.bins[g];
    if (c == 0) continue;
    lo = std::min(lo, g);
    hi = std::max(hi, g);
    sum += static_cast<double>(c) * g;
    if (c > mode_count) {
      mode_count = c;
      s.mode = g;
    }
  }
  s.min = lo;
  s.max = hi;
  s.intensity_sum = sum;
  s.mean = sum / n;

  // Lower median: the value at sorted position (n - 1) / 2.
  const std::uint64_t rank = (hist.total - 1) / 2;
  std::uint64_t seen = 0;
  for (int g = 0; g < 256; ++g) {
    seen += hist.bins[g];
    if (seen > rank) {
      s.median = g;
      break;
    }
  }

  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (int g = 0; g < 256; ++g) {
    const auto c = hist.bins[g];
    if (c == 0) continue;
    const double p = static_cast<double>(c) / n;
    const double d = g - s.mean;
    m2 += p * d * d;
    m3 += p * d * d * d;
    m4 += p * d * d * d * d;
    s.uniformity += p * p;
    s.entropy -= p * std::log2(p);
  }
  s.std = std::sqrt(m2);
  if (m2 > 0.0) {
    s.skewness = m3 / (m2 * s.std);
    s.kurtosis = m4 / (m2 * m2) - 3.0;
  } else {
    s.flags |= kTextureZeroVariance;
  }
  s.smoothness_r = 1.0 - 1.0 / (1.0 + m2 / (255.0 * 255.0));
  return s;
}

Point glcm_offset(GlcmAngle angle, int distance) noexcept {
  switch (angle) {
    case GlcmAngle::Deg0: return {distance, 0};
    case GlcmAngle::Deg45: return {distance, -distance};
    case GlcmAngle::Deg90: return {0, -distance};
    case GlcmAngle::Deg135: return {-distance, -distance};
  }
  return {distance, 0};
}

Glcm::Glcm(int levels, GlcmAngle angle, int distance, std::vector<double> probabilities)
    : levels_(levels), angle_(angle), distance_(distance), p_(std::move(probabilities)) {
  if (p_.size() != static_cast<std::size_t>(levels) * levels) {
    throw Error(ErrorKind::DimensionMismatch, "GLCM storage does not match its level count");
  }
}

Glcm build_glcm(const GrayRaster& gray, const BinaryMask& mask, GlcmAngle angle, int distance,
                int levels) {
  check_shapes(gray, mask);
  if (levels < 2 || levels > 256) {
    throw Error(ErrorKind::InvalidArgument, "GLCM levels must lie in [2, 256]");
  }
  if (distance < 1) throw Error(ErrorKind::InvalidArgument, "GLCM distance must be positive");

  const Point off = glcm_offset(angle, distance);
  const auto L = static_cast<std::size_t>(levels);
  // Counts stay exact in doubles far beyond any image size.
  std::vector<double> p(L * L, 0.0);
  std::uint64_t pairs = 0;
  for (int y = 0; y < gray.height(); ++y) {
    for (int x = 0; x < gray.width(); ++x) {
      if (mask.at(x, y) != Pixel::Foreground) continue;
      const int nx = x + off.x;
      const int ny = y + off.y;
      if (!is_foreground(mask, nx, ny)) continue;
      const std::size_t a = static_cast<std::size_t>(gray.at(x, y)) * L / 256;
      const std::size_t b = static_cast<std::size_t>(gray.at(nx, ny)) * L / 256;
      p[a * L + b] += 1.0;
      p[b * L + a] += 1.0;
      pairs += 2;
    }
  }
  if (pairs == 0) {
    throw Error(ErrorKind::NoValidPairs, "no foreground pixel pair at this offset");
  }
  const auto total = static_cast<double>(pairs);
  for (double& v : p) {
    if (v != 0.0) v /= total;
  }
  return Glcm(levels, angle, distance, std::move(p));
}

HaralickStats haralick_stats(const Glcm& g) {
  HaralickStats h;
  const int L = g.levels();
  const auto& p = g.probabilities();

  double mu = 0.0;
  for (int i = 0; i < L; ++i) {
    double row = 0.0;
    for (int j = 0; j < L; ++j) row += p[static_cast<std::size_t>(i) * L + j];
    mu += i * row;
  }
  double var = 0.0;
  double cov = 0.0;
  for (int i = 0; i < L; ++i) {
    for (int j = 0; j < L; ++j) {
      const double v = p[static_cast<std::size_t>(i) * L + j];
      if (v == 0.0) continue;
      const double di = i - mu;
      const double dj = j - mu;
      const double diff = i - j;
      h.energy += v * v;
      h.contrast += diff * diff * v;
      h.homogeneity += v / (1.0 + std::abs(diff));
      var += di * di * v;
      cov += di * dj * v;
    }
  }
  if (var > 0.0) {
    h.correlation = cov / var;
  } else {
    h.correlation = 1.0;
    h.correlation_undefined = true;
  }
  return h;
}

const std::array<std::string_view, TextureFeatures::kCount>& TextureFeatures::names() {
  static const std::array<std::string_view, kCount> kNames = {
      "Min",          "Max",        "Mean",       "StD",
      "Median",       "Mode",       "Skewness",   "Kurtosis",
      "IntensitySum", "Uniformity", "Entropy",    "SmoothnessR",
      "GlcmEnergy",   "GlcmContrast", "GlcmCorrelation", "GlcmHomogeneity",
  };
  return kNames;
}

std::array<double, TextureFeatures::kCount> TextureFeatures::values() const {
  return {first.min,           first.max,        first.mean,         first.std,
          first.median,        first.mode,       first.skewness,     first.kurtosis,
          first.intensity_sum, first.uniformity, first.entropy,      first.smoothness_r,
          glcm_energy,         glcm_contrast,    glcm_correlation,   glcm_homogeneity};
}

TextureFeatures extract_texture(const GrayRaster& gray, const BinaryMask& mask,
                                const TextureOptions& options) {
  TextureFeatures t;
  t.first = first_order_stats(gray, mask);
  t.flags = t.first.flags;

  int used = 0;
  for (std::size_t a = 0; a < kGlcmAngles.size(); ++a) {
    try {
      const Glcm g =
          build_glcm(gray, mask, kGlcmAngles[a], options.glcm_distance, options.glcm_levels);
      const HaralickStats h = haralick_stats(g);
      t.per_angle[a] = h;
      t.glcm_energy += h.energy;
      t.glcm_contrast += h.contrast;
      t.glcm_correlation += h.correlation;
      t.glcm_homogeneity += h.homogeneity;
      if (h.correlation_undefined) t.flags |= kTextureCorrelationUndefined;
      ++used;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NoValidPairs) throw;
      t.flags |= kTextureAnglesSkipped;
    }
  }
  if (used == 0) {
    throw Error(ErrorKind::NoValidPairs, "region admits no pixel pair at any GLCM angle");
  }
  t.glcm_energy /= used;
  t.glcm_contrast /= used;
  t.glcm_correlation /= used;
  t.glcm_homogeneity /= used;
  return t;
}

}  // namespace seedlab::texture
