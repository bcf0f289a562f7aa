#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "seedlab/raster.hpp"
#include "seedlab/segmentation.hpp"

namespace seedlab::morph {

struct PointD {
  double x = 0.0;
  double y = 0.0;
};

/// Closed-polyline length of a cyclic point sequence. Unit steps between
/// 8-neighbours contribute 1 or sqrt(2). A single point has no steps and is
/// given the unit-square boundary length 4.
double perimeter_length(std::span<const Point> contour);

/// Monotone-chain hull, counter-clockwise in a y-up frame (clockwise on
/// screen), collinear points dropped. Degenerate inputs yield one or two
/// vertices.
std::vector<Point> convex_hull(std::span<const Point> points);

/// Shoelace area of a simple polygon (absolute value).
double polygon_area(std::span<const Point> polygon);

/// Number of lattice points inside or on a convex lattice polygon (Pick's theorem).
long long lattice_point_count(std::span<const Point> hull);

/// Replaces digital staircases in the contour with straight chords. Every hull
/// vertex is kept; between them, a chord is extended while all skipped points
/// stay within `tolerance` of it.
std::vector<Point> straighten_contour(std::span<const Point> contour,
                                      std::span<const Point> hull, double tolerance = 1.0);

/// Perimeter used by every morphological descriptor: the length of the
/// straightened contour.
double region_perimeter(const segmentation::SeedRegion& region);

/// 4 pi Area / Perimeter^2 with the straightened perimeter (not clamped).
double circularity(const segmentation::SeedRegion& region);

struct Calipers {
  double feret = 0.0;
  double breadth = 0.0;
  std::array<PointD, 2> feret_axis{};
  std::array<PointD, 2> breadth_axis{};
};

/// Feret diameter by rotating calipers and breadth as the hull's extent along
/// the direction perpendicular to it. The breadth axis is the perpendicular
/// through the midpoint of the two extremal vertices.
Calipers feret_and_breadth(std::span<const Point> hull);

struct RadiiStats {
  double min = 0.0;
  double max = 0.0;
  double mean = 0.0;
  double variance = 0.0;  // population
};

RadiiStats radii_stats(std::span<const Point> contour, segmentation::Centroid centroid);

struct BendingEnergy {
  double value = 0.0;
  bool degenerate = false;
};

inline constexpr int kBendingSamples = 128;
inline constexpr int kBendingMinPoints = 8;

/// Sum of squared curvature times arc step over 128 equal arc-length samples
/// of a closed polyline. Fewer than 8 points yields 0 with `degenerate` set.
BendingEnergy bending_energy(std::span<const Point> contour);

enum MorphFlag : std::uint32_t {
  kMorphBendingDegenerate = 1u << 0,
  kMorphHaralickRatioUnbounded = 1u << 1,
};

struct MorphFeatures {
  double area = 0;
  double perimeter = 0;
  double feret = 0;
  double breadth = 0;
  double asp_ratio = 0;
  double convex_area = 0;
  double convex_perimeter = 0;
  double r_factor = 0;
  double ar_equiv_d = 0;
  double per_equiv_d = 0;
  double min_r = 0;
  double max_r = 0;
  double avg_radius = 0;
  double variance_radius = 0;
  double equiv_ell_ar = 0;
  double modification_ratio = 0;
  double haralick_ratio = 0;
  double thinness_r = 0;
  double roundness = 0;
  double compactness = 0;
  double solidity = 0;
  double convexity = 0;
  double concavity = 0;
  double ar_bbox = 0;
  double rectangularity = 0;
  double sphericity = 0;
  double elongation = 0;
  double bending_energy = 0;
  double jaggedness = 0;
  double circularity = 0;
  double endocarp = 0;
  double fb_to_cm = 0;

  std::uint32_t flags = 0;

  static constexpr std::size_t kCount = 32;
  static const std::array<std::string_view, kCount>& names();
  std::array<double, kCount> values() const;
};

/// All 32 shape descriptors of a region. `mask` must share the region's
/// coordinate frame; it is only consulted for the interior-pixel count.
/// Throws DegenerateRegion when the breadth is zero.
MorphFeatures extract_morph(const BinaryMask& mask, const segmentation::SeedRegion& region);

}  // namespace seedlab::morph
