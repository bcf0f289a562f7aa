#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "seedlab/raster.hpp"

namespace seedlab::segmentation {

struct BoundingBox {
  int x_min = 0;
  int y_min = 0;
  int x_max = 0;  // inclusive
  int y_max = 0;  // inclusive

  int width() const noexcept { return x_max - x_min + 1; }
  int height() const noexcept { return y_max - y_min + 1; }
  long long area() const noexcept { return static_cast<long long>(width()) * height(); }

  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

struct Centroid {
  double x = 0.0;
  double y = 0.0;
};

/// One 8-connected foreground component.
struct SeedRegion {
  int label = 0;                 // 1-based, raster order of first pixel
  std::vector<Point> pixels;     // raster order
  BoundingBox bbox;
  Centroid centroid;
  std::vector<Point> contour;    // Moore trace, clockwise, starts at the topmost-leftmost pixel

  std::size_t area() const noexcept { return pixels.size(); }
};

struct RegionFilter {
  double min_area = 50.0;
  double max_area = std::numeric_limits<double>::infinity();
  double circ_min = 0.0;
  double circ_max = 1.0;

  /// min_area = 50 px, max_area = a quarter of the image, circularity [0, 1].
  static RegionFilter defaults_for(int image_width, int image_height);
  void validate() const;
};

/// Partial filter from user options; unset bounds take the per-image
/// defaults.
struct RegionFilterOverrides {
  std::optional<double> min_area;
  std::optional<double> max_area;
  std::optional<double> circ_min;
  std::optional<double> circ_max;

  /// Throws InvalidArgument if the merged filter is inconsistent.
  RegionFilter resolve(int image_width, int image_height) const;
};

using Histogram = std::array<std::uint64_t, 256>;

/// Otsu's method: returns the largest level t of the lower class {<= t} that
/// maximises between-class variance, choosing the smallest t on ties.
/// Throws DegenerateHistogram when fewer than two bins are occupied.
int otsu_threshold(const Histogram& hist);

Histogram blue_histogram(const RgbRaster& img);

/// Seed pixels are those whose blue value falls in Otsu's lower class or
/// whose blue channel is not strictly dominant; enclosed background is then
/// filled. A constant blue channel skips the threshold and relies on the
/// dominance test alone.
BinaryMask blue_background_mask(const RgbRaster& img);

/// Flips every background component (4-connected) that does not touch the
/// image border to foreground.
void fill_holes(BinaryMask& mask);

std::vector<SeedRegion> connected_components(const BinaryMask& mask);

/// Moore-neighbour boundary trace of the 8-connected component containing
/// `start`, which must be its topmost-then-leftmost pixel.
std::vector<Point> trace_contour(const BinaryMask& mask, Point start);

std::vector<SeedRegion> filter_regions(std::span<const SeedRegion> regions, const RegionFilter& f);

/// Circularity as used for filtering: the morphological circularity clamped to [0, 1].
double filter_circularity(const SeedRegion& region);

struct RegionCrop {
  RgbRaster image;
  BinaryMask mask;   // only the region's pixels are foreground
  Point origin;      // top-left of the crop in source coordinates
};

RegionCrop crop_region(const RgbRaster& img, const BinaryMask& mask, const SeedRegion& region,
                       int pad);

/// Mask holding exactly the given regions' pixels.
BinaryMask mask_from_regions(int width, int height, std::span<const SeedRegion> regions);

/// Region expressed in a crop's coordinate frame.
SeedRegion translate(const SeedRegion& region, Point offset);

}  // namespace seedlab::segmentation
