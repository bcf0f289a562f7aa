#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "seedlab/raster.hpp"

namespace seedlab::texture {

/// Gray-level histogram over a mask's foreground.
struct GrayHistogram {
  std::array<std::uint64_t, 256> bins{};
  std::uint64_t total = 0;
};

/// Throws EmptyRegion when the mask selects nothing.
GrayHistogram masked_histogram(const GrayRaster& gray, const BinaryMask& mask);

enum TextureFlag : std::uint32_t {
  kTextureZeroVariance = 1u << 0,        // skewness and kurtosis reported as 0
  kTextureCorrelationUndefined = 1u << 1, // some angle had a zero-variance GLCM
  kTextureAnglesSkipped = 1u << 2,        // at least one angle had no valid pair
};

struct FirstOrderStats {
  double min = 0;
  double max = 0;
  double mean = 0;
  double std = 0;
  double median = 0;
  double mode = 0;
  double skewness = 0;
  double kurtosis = 0;  // excess
  double intensity_sum = 0;
  double uniformity = 0;
  double entropy = 0;  // bits
  double smoothness_r = 0;
  std::uint32_t flags = 0;
};

FirstOrderStats first_order_stats(const GrayRaster& gray, const BinaryMask& mask);
FirstOrderStats first_order_stats(const GrayHistogram& hist);

enum class GlcmAngle { Deg0, Deg45, Deg90, Deg135 };
inline constexpr std::array<GlcmAngle, 4> kGlcmAngles = {GlcmAngle::Deg0, GlcmAngle::Deg45,
                                                         GlcmAngle::Deg90, GlcmAngle::Deg135};

/// Pixel offset (dx, dy) for an angle at distance d, y pointing down.
Point glcm_offset(GlcmAngle angle, int distance) noexcept;

/// Symmetric, normalised co-occurrence matrix.
class Glcm {
 public:
  Glcm(int levels, GlcmAngle angle, int distance, std::vector<double> probabilities);

  int levels() const noexcept { return levels_; }
  GlcmAngle angle() const noexcept { return angle_; }
  int distance() const noexcept { return distance_; }
  double operator()(int i, int j) const noexcept {
    return p_[static_cast<std::size_t>(i) * levels_ + j];
  }
  const std::vector<double>& probabilities() const noexcept { return p_; }

 private:
  int levels_;
  GlcmAngle angle_;
  int distance_;
  std::vector<double> p_;
};

/// Gray values are requantised to `levels` bins (g * levels / 256) before
/// counting; 256 keeps full depth. Both endpoints of a pair must be
/// foreground. Throws NoValidPairs when no such pair exists.
Glcm build_glcm(const GrayRaster& gray, const BinaryMask& mask, GlcmAngle angle, int distance = 1,
                int levels = 256);

struct HaralickStats {
  double energy = 0;
  double contrast = 0;
  double correlation = 0;
  double homogeneity = 0;
  bool correlation_undefined = false;
};

HaralickStats haralick_stats(const Glcm& g);

struct TextureFeatures {
  FirstOrderStats first;
  double glcm_energy = 0;
  double glcm_contrast = 0;
  double glcm_correlation = 0;
  double glcm_homogeneity = 0;
  /// Per-angle values in kGlcmAngles order; absent angles hold nothing.
  std::array<std::optional<HaralickStats>, 4> per_angle{};
  std::uint32_t flags = 0;

  static constexpr std::size_t kCount = 16;
  static const std::array<std::string_view, kCount>& names();
  std::array<double, kCount> values() const;
};

struct TextureOptions {
  int glcm_levels = 256;
  int glcm_distance = 1;
};

/// First-order statistics plus the four Haralick statistics averaged over
/// the angles that admit at least one pair.
TextureFeatures extract_texture(const GrayRaster& gray, const BinaryMask& mask,
                                const TextureOptions& options = {});

}  // namespace seedlab::texture
