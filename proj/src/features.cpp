#include "seedlab/features.hpp"

#include <algorithm>
#include <cctype>

namespace seedlab {

FeatureCategory parse_categories(std::string_view text) {
  FeatureCategory set = FeatureCategory::None;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    std::string token(text.substr(pos, comma - pos));
    std::erase_if(token, [](unsigned char c) { return std::isspace(c); });
    std::ranges::transform(token, token.begin(), [](unsigned char c) { return std::tolower(c); });
    if (token == "morph" || token == "morphological") {
      set = set | FeatureCategory::Morph;
    } else if (token == "texture") {
      set = set | FeatureCategory::Texture;
    } else if (token == "color" || token == "colour") {
      set = set | FeatureCategory::Color;
    } else if (token == "all") {
      set = set | FeatureCategory::All;
    } else if (!token.empty()) {
      throw Error(ErrorKind::InvalidArgument, "unknown feature category '" + token + "'");
    }
    pos = comma + 1;
  }
  if (set == FeatureCategory::None) {
    throw Error(ErrorKind::InvalidArgument, "at least one feature category is required");
  }
  return set;
}

std::string to_string(FeatureCategory set) {
  if (set == FeatureCategory::All) return "all";
  std::string out;
  auto add = [&](FeatureCategory c, const char* name) {
    if (!has(set, c)) return;
    if (!out.empty()) out += '+';
    out += name;
  };
  add(FeatureCategory::Morph, "morph");
  add(FeatureCategory::Texture, "texture");
  add(FeatureCategory::Color, "color");
  return out.empty() ? "none" : out;
}

const std::array<FeatureCategory, 7>& category_combinations() {
  using enum FeatureCategory;
  static const std::array<FeatureCategory, 7> kCombos = {
      Morph, Texture, Color, Morph | Texture, Morph | Color, Texture | Color, All,
  };
  return kCombos;
}

std::size_t category_arity(FeatureCategory set) {
  std::size_t n = 0;
  if (has(set, FeatureCategory::Morph)) n += morph::MorphFeatures::kCount;
  if (has(set, FeatureCategory::Texture)) n += texture::TextureFeatures::kCount;
  if (has(set, FeatureCategory::Color)) n += color::ColorFeatures::kCount;
  return n;
}

std::vector<std::string> feature_names(FeatureCategory set) {
  std::vector<std::string> names;
  auto append = [&](const auto& list) {
    for (const auto name : list) names.emplace_back(name);
  };
  if (has(set, FeatureCategory::Morph)) append(morph::MorphFeatures::names());
  if (has(set, FeatureCategory::Texture)) append(texture::TextureFeatures::names());
  if (has(set, FeatureCategory::Color)) append(color::ColorFeatures::names());
  return names;
}

std::vector<double> FeatureVector::select(FeatureCategory set) const {
  std::vector<double> out;
  out.reserve(category_arity(set));
  auto append = [&](const auto& values) { out.insert(out.end(), values.begin(), values.end()); };
  if (has(set, FeatureCategory::Morph)) append(morph.values());
  if (has(set, FeatureCategory::Texture)) append(texture.values());
  if (has(set, FeatureCategory::Color)) append(color.values());
  return out;
}

FeatureVector extract_features(const RgbRaster& img, const BinaryMask& mask,
                               const segmentation::SeedRegion& region,
                               const ExtractOptions& options) {
  FeatureVector f;
  f.morph = morph::extract_morph(mask, region);
  const auto crop = segmentation::crop_region(img, mask, region, 0);
  f.texture = texture::extract_texture(to_gray(crop.image), crop.mask, options.texture);
  f.color = color::extract_color(crop.image, crop.mask);
  return f;
}

ImageAnalysis analyse_image(const RgbRaster& img,
                            const std::optional<segmentation::RegionFilter>& filter,
                            const ExtractOptions& options) {
  ImageAnalysis out{segmentation::blue_background_mask(img), {}, {}};
  const auto f = filter.value_or(segmentation::RegionFilter::defaults_for(img.width(), img.height()));
  const auto regions = segmentation::filter_regions(segmentation::connected_components(out.mask), f);
  for (const auto& region : regions) {
    try {
      out.seeds.push_back({region, extract_features(img, out.mask, region, options)});
    } catch (const Error& e) {
      out.skipped.push_back("region " + std::to_string(region.label) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace seedlab
