#include "seedlab/morphfeat.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <set>

namespace seedlab::morph {

namespace {

using std::numbers::pi;

// Binomial [1 2 1]/4 passes applied to the resampled contour before
// differentiating; tames the residual polygon corners.
constexpr int kBendingSmoothingPasses = 8;

long long cross(Point o, Point a, Point b) noexcept {
  return static_cast<long long>(a.x - o.x) * (b.y - o.y) -
         static_cast<long long>(a.y - o.y) * (b.x - o.x);
}

long long dist2(Point a, Point b) noexcept {
  const long long dx = a.x - b.x;
  const long long dy = a.y - b.y;
  return dx * dx + dy * dy;
}

double dist(PointD a, PointD b) noexcept { return std::hypot(a.x - b.x, a.y - b.y); }

PointD to_d(Point p) noexcept { return {static_cast<double>(p.x), static_cast<double>(p.y)}; }

double segment_distance(Point p, Point a, Point b) noexcept {
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  const double len2 = dx * dx + dy * dy;
  if (len2 == 0.0) return std::hypot(p.x - a.x, p.y - a.y);
  const double t = std::clamp(((p.x - a.x) * dx + (p.y - a.y) * dy) / len2, 0.0, 1.0);
  return std::hypot(p.x - a.x - t * dx, p.y - a.y - t * dy);
}

double closed_length(std::span<const PointD> poly) {
  double total = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) total += dist(poly[i], poly[(i + 1) % poly.size()]);
  return total;
}

}  // namespace

double perimeter_length(std::span<const Point> contour) {
  if (contour.size() <= 1) return 4.0;
  double total = 0.0;
  for (std::size_t i = 0; i < contour.size(); ++i) {
    const Point a = contour[i];
    const Point b = contour[(i + 1) % contour.size()];
    total += std::sqrt(static_cast<double>(dist2(a, b)));
  }
  return total;
}

std::vector<Point> convex_hull(std::span<const Point> points) {
  std::vector<Point> pts(points.begin(), points.end());
  std::ranges::sort(pts);
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() <= 2) return pts;

  std::vector<Point> hull(2 * pts.size());
  std::size_t k = 0;
  for (const Point p : pts) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    const Point p = pts[i];
    while (k >= lower && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  hull.resize(k - 1);
  return hull;
}

double polygon_area(std::span<const Point> polygon) {
  if (polygon.size() < 3) return 0.0;
  long long twice = 0;
  for (std::size_t i = 0; i < polygon.size(); ++i) {
    const Point a = polygon[i];
    const Point b = polygon[(i + 1) % polygon.size()];
    twice += static_cast<long long>(a.x) * b.y - static_cast<long long>(b.x) * a.y;
  }
  return std::abs(static_cast<double>(twice)) / 2.0;
}

long long lattice_point_count(std::span<const Point> hull) {
  if (hull.empty()) return 0;
  if (hull.size() == 1) return 1;
  long long twice_area = 0;
  long long boundary = 0;
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const Point a = hull[i];
    const Point b = hull[(i + 1) % hull.size()];
    twice_area += static_cast<long long>(a.x) * b.y - static_cast<long long>(b.x) * a.y;
    boundary += std::gcd(std::abs(b.x - a.x), std::abs(b.y - a.y));
  }
  // Pick: A = I + B/2 - 1, so I + B = (2A + B + 2) / 2.
  return (std::abs(twice_area) + boundary + 2) / 2;
}

std::vector<Point> straighten_contour(std::span<const Point> contour,
                                      std::span<const Point> hull, double tolerance) {
  const std::size_t n = contour.size();
  if (n <= 2) return {contour.begin(), contour.end()};

  const std::set<Point> corners(hull.begin(), hull.end());
  std::vector<std::size_t> breaks;
  for (std::size_t i = 0; i < n; ++i) {
    if (corners.contains(contour[i])) breaks.push_back(i);
  }
  if (breaks.empty()) breaks.push_back(0);

  auto at = [&](std::size_t i) { return contour[i % n]; };
  std::vector<Point> out;
  for (std::size_t k = 0; k < breaks.size(); ++k) {
    const std::size_t stop = k + 1 < breaks.size() ? breaks[k + 1] : breaks[0] + n;
    std::size_t anchor = breaks[k];
    out.push_back(at(anchor));
    std::size_t end = anchor + 1;
    while (end < stop) {
      const std::size_t candidate = end + 1;
      bool fits = true;
      for (std::size_t m = anchor + 1; m < candidate && fits; ++m) {
        fits = segment_distance(at(m), at(anchor), at(candidate)) <= tolerance;
      }
      if (fits) {
        end = candidate;
      } else {
        anchor = end;
        out.push_back(at(anchor));
        end = anchor + 1;
      }
    }
  }
  return out;
}

double region_perimeter(const segmentation::SeedRegion& region) {
  if (region.contour.size() <= 1) return perimeter_length(region.contour);
  const auto hull = convex_hull(region.contour);
  return perimeter_length(straighten_contour(region.contour, hull));
}

double circularity(const segmentation::SeedRegion& region) {
  const double p = region_perimeter(region);
  return 4.0 * pi * static_cast<double>(region.area()) / (p * p);
}

Calipers feret_and_breadth(std::span<const Point> hull) {
  Calipers c;
  if (hull.empty()) return c;
  if (hull.size() == 1) {
    c.feret_axis = {to_d(hull[0]), to_d(hull[0])};
    c.breadth_axis = c.feret_axis;
    return c;
  }

  std::size_t best_a = 0;
  std::size_t best_b = 1;
  long long best = dist2(hull[0], hull[1]);
  const std::size_t m = hull.size();
  if (m >= 3) {
    auto consider = [&](std::size_t a, std::size_t b) {
      const long long d = dist2(hull[a], hull[b]);
      if (d > best) {
        best = d;
        best_a = a;
        best_b = b;
      }
    };
    std::size_t j = 1;
    for (std::size_t i = 0; i < m; ++i) {
      const std::size_t ni = (i + 1) % m;
      while (std::abs(cross(hull[i], hull[ni], hull[(j + 1) % m])) >
             std::abs(cross(hull[i], hull[ni], hull[j]))) {
        j = (j + 1) % m;
      }
      consider(i, j);
      consider(ni, j);
    }
  }

  const PointD a = to_d(hull[best_a]);
  const PointD b = to_d(hull[best_b]);
  c.feret = std::sqrt(static_cast<double>(best));
  c.feret_axis = {a, b};

  const PointD u{(b.x - a.x) / c.feret, (b.y - a.y) / c.feret};
  const PointD v{-u.y, u.x};
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  PointD p_lo{};
  PointD p_hi{};
  for (const Point p : hull) {
    const PointD q = to_d(p);
    const double s = q.x * v.x + q.y * v.y;
    if (s < lo) {
      lo = s;
      p_lo = q;
    }
    if (s > hi) {
      hi = s;
      p_hi = q;
    }
  }
  c.breadth = hi - lo;

  const PointD mid{(p_lo.x + p_hi.x) / 2.0, (p_lo.y + p_hi.y) / 2.0};
  const double along = mid.x * u.x + mid.y * u.y;
  c.breadth_axis = {PointD{along * u.x + lo * v.x, along * u.y + lo * v.y},
                    PointD{along * u.x + hi * v.x, along * u.y + hi * v.y}};
  return c;
}

RadiiStats radii_stats(std::span<const Point> contour, segmentation::Centroid centroid) {
  RadiiStats r;
  if (contour.empty()) return r;
  r.min = std::numeric_limits<double>::infinity();
  double sum = 0.0;
  std::vector<double> radii;
  radii.reserve(contour.size());
  for (const Point p : contour) {
    const double d = std::hypot(p.x - centroid.x, p.y - centroid.y);
    radii.push_back(d);
    r.min = std::min(r.min, d);
    r.max = std::max(r.max, d);
    sum += d;
  }
  r.mean = sum / static_cast<double>(radii.size());
  double ss = 0.0;
  for (const double d : radii) ss += (d - r.mean) * (d - r.mean);
  r.variance = ss / static_cast<double>(radii.size());
  return r;
}

BendingEnergy bending_energy(std::span<const Point> contour) {
  if (contour.size() < static_cast<std::size_t>(kBendingMinPoints)) return {0.0, true};

  const auto hull = convex_hull(contour);
  const auto straight = straighten_contour(contour, hull);
  std::vector<PointD> poly;
  poly.reserve(straight.size());
  for (const Point p : straight) poly.push_back(to_d(p));
  const double length = closed_length(poly);
  if (poly.size() < 2 || length <= 0.0) return {0.0, true};

  constexpr int n = kBendingSamples;
  const double step = length / n;
  std::vector<PointD> samples(n);
  std::size_t edge = 0;
  double edge_start = 0.0;
  for (int k = 0; k < n; ++k) {
    const double s = k * step;
    double edge_len = dist(poly[edge], poly[(edge + 1) % poly.size()]);
    while (edge_start + edge_len < s && edge + 1 < poly.size()) {
      edge_start += edge_len;
      ++edge;
      edge_len = dist(poly[edge], poly[(edge + 1) % poly.size()]);
    }
    const double t = edge_len > 0.0 ? std::clamp((s - edge_start) / edge_len, 0.0, 1.0) : 0.0;
    const PointD a = poly[edge];
    const PointD b = poly[(edge + 1) % poly.size()];
    samples[k] = {a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)};
  }

  std::vector<PointD> tmp(n);
  for (int pass = 0; pass < kBendingSmoothingPasses; ++pass) {
    for (int k = 0; k < n; ++k) {
      const PointD& l = samples[(k + n - 1) % n];
      const PointD& c = samples[k];
      const PointD& r = samples[(k + 1) % n];
      tmp[k] = {(l.x + 2.0 * c.x + r.x) / 4.0, (l.y + 2.0 * c.y + r.y) / 4.0};
    }
    samples.swap(tmp);
  }

  std::vector<double> theta(n);
  for (int k = 0; k < n; ++k) {
    const PointD& next = samples[(k + 1) % n];
    const PointD& prev = samples[(k + n - 1) % n];
    theta[k] = std::atan2(next.y - prev.y, next.x - prev.x);
  }
  double energy = 0.0;
  for (int k = 0; k < n; ++k) {
    const double turn = std::remainder(theta[(k + 1) % n] - theta[k], 2.0 * pi);
    const double kappa = turn / step;
    energy += kappa * kappa * step;
  }
  return {energy, false};
}

const std::array<std::string_view, MorphFeatures::kCount>& MorphFeatures::names() {
  static const std::array<std::string_view, kCount> kNames = {
      "Area",          "Perimeter",        "Feret",          "Breadth",
      "AspRatio",      "ConvexArea",       "ConvexPerimeter", "RFactor",
      "ArEquivD",      "PerEquivD",        "MinR",           "MaxR",
      "AvgRadius",     "VarianceRadius",   "EquivEllAr",     "ModificationRatio",
      "HaralickRatio", "ThinnessR",        "Roundness",      "Compactness",
      "Solidity",      "Convexity",        "Concavity",      "ArBBox",
      "Rectangularity", "Sphericity",      "Elongation",     "BendingEnergy",
      "Jaggedness",    "Circularity",      "Endocarp",       "FBtoCM",
  };
  return kNames;
}

std::array<double, MorphFeatures::kCount> MorphFeatures::values() const {
  return {area,          perimeter,          feret,          breadth,
          asp_ratio,     convex_area,        convex_perimeter, r_factor,
          ar_equiv_d,    per_equiv_d,        min_r,          max_r,
          avg_radius,    variance_radius,    equiv_ell_ar,   modification_ratio,
          haralick_ratio, thinness_r,        roundness,      compactness,
          solidity,      convexity,          concavity,      ar_bbox,
          rectangularity, sphericity,        elongation,     bending_energy,
          jaggedness,    circularity,        endocarp,       fb_to_cm};
}

MorphFeatures extract_morph(const BinaryMask& mask, const segmentation::SeedRegion& region) {
  if (region.pixels.empty() || region.contour.empty()) {
    throw Error(ErrorKind::EmptyRegion, "region has no pixels");
  }
  MorphFeatures f;
  const auto hull = convex_hull(region.contour);
  const Calipers cal = feret_and_breadth(hull);
  if (cal.breadth <= 0.0) {
    throw Error(ErrorKind::DegenerateRegion,
                "region " + std::to_string(region.label) + " has zero breadth");
  }

  f.area = static_cast<double>(region.area());
  f.perimeter = region.contour.size() <= 1
                    ? perimeter_length(region.contour)
                    : perimeter_length(straighten_contour(region.contour, hull));
  f.feret = cal.feret;
  f.breadth = cal.breadth;
  f.convex_area = static_cast<double>(lattice_point_count(hull));
  f.convex_perimeter = perimeter_length(hull);

  const RadiiStats radii = radii_stats(region.contour, region.centroid);
  f.min_r = radii.min;
  f.max_r = radii.max;
  f.avg_radius = radii.mean;
  f.variance_radius = radii.variance;

  const BendingEnergy be = bending_energy(region.contour);
  f.bending_energy = be.value;
  if (be.degenerate) f.flags |= kMorphBendingDegenerate;

  const double radius_std = std::sqrt(radii.variance);
  if (radius_std > 0.0) {
    f.haralick_ratio = radii.mean / radius_std;
  } else {
    f.haralick_ratio = std::numeric_limits<double>::max();
    f.flags |= kMorphHaralickRatioUnbounded;
  }

  f.asp_ratio = f.feret / f.breadth;
  f.r_factor = f.convex_area / (f.feret * pi);
  f.ar_equiv_d = std::sqrt(4.0 * f.area / pi);
  f.per_equiv_d = f.perimeter / pi;
  f.equiv_ell_ar = pi * (f.feret / 2.0) * (f.breadth / 2.0);
  f.modification_ratio = 2.0 * f.min_r / f.feret;
  f.thinness_r = f.perimeter * f.perimeter / f.area;
  f.roundness = 4.0 * f.area / (pi * f.feret * f.feret);
  f.compactness = f.ar_equiv_d / f.feret;
  f.solidity = f.area / f.convex_area;
  f.convexity = f.convex_perimeter / f.perimeter;
  f.concavity = f.convex_area - f.area;
  f.ar_bbox = static_cast<double>(region.bbox.area());
  f.rectangularity = f.area / f.ar_bbox;
  f.sphericity = f.max_r > 0.0 ? f.min_r / f.max_r : 1.0;
  f.circularity = 4.0 * pi * f.area / (f.perimeter * f.perimeter);
  f.elongation = f.perimeter * f.perimeter / (4.0 * pi * f.area);
  f.jaggedness = 2.0 * std::sqrt(pi * f.area) / f.perimeter;

  long long interior = 0;
  for (const Point p : region.pixels) {
    if (is_foreground(mask, p.x + 1, p.y) && is_foreground(mask, p.x - 1, p.y) &&
        is_foreground(mask, p.x, p.y + 1) && is_foreground(mask, p.x, p.y - 1)) {
      ++interior;
    }
  }
  f.endocarp = static_cast<double>(interior);

  // Intersection of the feret line and the breadth axis, against the centroid.
  const PointD fa = cal.feret_axis[0];
  const PointD fb = cal.feret_axis[1];
  const PointD u{(fb.x - fa.x) / f.feret, (fb.y - fa.y) / f.feret};
  const PointD v{-u.y, u.x};
  const PointD bm{(cal.breadth_axis[0].x + cal.breadth_axis[1].x) / 2.0,
                  (cal.breadth_axis[0].y + cal.breadth_axis[1].y) / 2.0};
  const double along = bm.x * u.x + bm.y * u.y;
  const double across = fa.x * v.x + fa.y * v.y;
  const PointD cross_pt{along * u.x + across * v.x, along * u.y + across * v.y};
  f.fb_to_cm = std::hypot(cross_pt.x - region.centroid.x, cross_pt.y - region.centroid.y);
  return f;
}

}  // namespace seedlab::morph
