#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "seedlab/colorfeat.hpp"
#include "seedlab/morphfeat.hpp"
#include "seedlab/raster.hpp"
#include "seedlab/segmentation.hpp"
#include "seedlab/texturefeat.hpp"

namespace seedlab {

/// Descriptor families; combine with `|`.
enum class FeatureCategory : std::uint8_t {
  None = 0,
  Morph = 1,
  Texture = 2,
  Color = 4,
  All = 7,
};

constexpr FeatureCategory operator|(FeatureCategory a, FeatureCategory b) noexcept {
  return static_cast<FeatureCategory>(static_cast<std::uint8_t>(a) | static_cast<std::uint8_t>(b));
}
constexpr bool has(FeatureCategory set, FeatureCategory c) noexcept {
  return (static_cast<std::uint8_t>(set) & static_cast<std::uint8_t>(c)) != 0;
}

/// Parses a comma list of {morph, texture, color, all}; throws InvalidArgument.
FeatureCategory parse_categories(std::string_view text);
std::string to_string(FeatureCategory set);

/// The seven non-empty category combinations, singles first, in the order
/// morph, texture, color, morph+texture, morph+color, texture+color, all.
const std::array<FeatureCategory, 7>& category_combinations();

/// Column count of a selection: morph 32, texture 16, color 16.
std::size_t category_arity(FeatureCategory set);

/// Column names of a selection, morph then texture then color.
std::vector<std::string> feature_names(FeatureCategory set);

/// The 64 descriptors of one seed.
struct FeatureVector {
  morph::MorphFeatures morph;
  texture::TextureFeatures texture;
  color::ColorFeatures color;

  static constexpr std::size_t kCount = 64;
  std::vector<double> select(FeatureCategory set) const;
};

struct ExtractOptions {
  texture::TextureOptions texture;
};

/// Full descriptor set for one region of a segmented image. `mask` is the
/// whole-image mask the region was labelled from.
FeatureVector extract_features(const RgbRaster& img, const BinaryMask& mask,
                               const segmentation::SeedRegion& region,
                               const ExtractOptions& options = {});

/// One measured seed of an analysed image.
struct SeedMeasurement {
  segmentation::SeedRegion region;
  FeatureVector features;
};

struct ImageAnalysis {
  BinaryMask mask;
  std::vector<SeedMeasurement> seeds;
  std::vector<std::string> skipped;  // per-region failures, e.g. zero-breadth slivers
};

/// Segment, filter and measure every seed in a scan. Without a filter,
/// RegionFilter::defaults_for(image) applies.
ImageAnalysis analyse_image(const RgbRaster& img,
                            const std::optional<segmentation::RegionFilter>& filter = {},
                            const ExtractOptions& options = {});

}  // namespace seedlab
