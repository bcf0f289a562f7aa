#include "seedlab/segmentation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <optional>

#include "seedlab/morphfeat.hpp"

namespace seedlab::segmentation {

namespace {

// Clockwise on screen (y grows downwards), starting at west.
constexpr std::array<Point, 8> kMoore = {{
    {-1, 0}, {-1, -1}, {0, -1}, {1, -1}, {1, 0}, {1, 1}, {0, 1}, {-1, 1},
}};

int moore_index(Point delta) {
  for (int i = 0; i < 8; ++i) {
    if (kMoore[i] == delta) return i;
  }
  return -1;
}

bool raster_less(const Point& a, const Point& b) noexcept {
  return a.y != b.y ? a.y < b.y : a.x < b.x;
}

}  // namespace

RegionFilter RegionFilter::defaults_for(int image_width, int image_height) {
  RegionFilter f;
  f.max_area = static_cast<double>(image_width) * image_height / 4.0;
  return f;
}

RegionFilter RegionFilterOverrides::resolve(int image_width, int image_height) const {
  RegionFilter f = RegionFilter::defaults_for(image_width, image_height);
  f.min_area = min_area.value_or(f.min_area);
  f.max_area = max_area.value_or(f.max_area);
  f.circ_min = circ_min.value_or(f.circ_min);
  f.circ_max = circ_max.value_or(f.circ_max);
  f.validate();
  return f;
}

void RegionFilter::validate() const {
  if (!(min_area >= 0.0) || !(min_area <= max_area)) {
    throw Error(ErrorKind::InvalidArgument, "region filter requires 0 <= min_area <= max_area");
  }
  if (!(circ_min >= 0.0 && circ_min <= circ_max && circ_max <= 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "region filter requires 0 <= circ_min <= circ_max <= 1");
  }
}

namespace {
__extension__ typedef unsigned __int128 u128;
__extension__ typedef __int128 i128;
}  // namespace

int otsu_threshold(const Histogram& hist) {
  // Integer prefix sums make the objective identical for equivalent splits,
  // so ties are exact and resolve to the smallest t.
  u128 total = 0;
  u128 weighted = 0;
  int occupied = 0;
  for (int i = 0; i < 256; ++i) {
    total += hist[i];
    weighted += static_cast<u128>(hist[i]) * static_cast<unsigned>(i);
    occupied += hist[i] > 0 ? 1 : 0;
  }
  if (occupied < 2) {
    throw Error(ErrorKind::DegenerateHistogram, "histogram has fewer than two occupied levels");
  }

  // sigma_b^2 * total^2 = (total * S0 - w0 * S)^2 / (w0 * w1)
  long double best = -1.0L;
  int best_t = 0;
  u128 w0 = 0;
  u128 s0 = 0;
  for (int t = 0; t < 255; ++t) {
    w0 += hist[t];
    s0 += static_cast<u128>(hist[t]) * static_cast<unsigned>(t);
    const u128 w1 = total - w0;
    if (w0 == 0 || w1 == 0) continue;
    const i128 diff = static_cast<i128>(total * s0) - static_cast<i128>(w0 * weighted);
    const long double num = static_cast<long double>(diff) * static_cast<long double>(diff);
    const long double score = num / (static_cast<long double>(w0) * static_cast<long double>(w1));
    if (score > best) {
      best = score;
      best_t = t;
    }
  }
  return best_t;
}

Histogram blue_histogram(const RgbRaster& img) {
  Histogram hist{};
  for (const Rgb& p : img.pixels()) ++hist[p.b];
  return hist;
}

BinaryMask blue_background_mask(const RgbRaster& img) {
  std::optional<int> threshold;
  try {
    threshold = otsu_threshold(blue_histogram(img));
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::DegenerateHistogram) throw;
  }

  BinaryMask mask(img.width(), img.height());
  auto src = img.pixels();
  auto dst = mask.pixels();
  for (std::size_t i = 0; i < src.size(); ++i) {
    const Rgb p = src[i];
    const bool below = threshold && p.b <= *threshold;
    const bool not_blue = p.b <= std::max(p.r, p.g);
    dst[i] = (below || not_blue) ? Pixel::Foreground : Pixel::Background;
  }
  fill_holes(mask);
  return mask;
}

void fill_holes(BinaryMask& mask) {
  const int w = mask.width();
  const int h = mask.height();
  Grid<std::uint8_t> outside(w, h, 0);
  std::deque<Point> queue;
  auto seed = [&](int x, int y) {
    if (mask.at(x, y) == Pixel::Background && !outside.at(x, y)) {
      outside.at(x, y) = 1;
      queue.push_back({x, y});
    }
  };
  for (int x = 0; x < w; ++x) {
    seed(x, 0);
    seed(x, h - 1);
  }
  for (int y = 0; y < h; ++y) {
    seed(0, y);
    seed(w - 1, y);
  }
  constexpr std::array<Point, 4> kFour = {{{1, 0}, {-1, 0}, {0, 1}, {0, -1}}};
  while (!queue.empty()) {
    const Point p = queue.front();
    queue.pop_front();
    for (const Point d : kFour) {
      const int nx = p.x + d.x;
      const int ny = p.y + d.y;
      if (mask.contains(nx, ny)) seed(nx, ny);
    }
  }
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (mask.at(x, y) == Pixel::Background && !outside.at(x, y)) {
        mask.at(x, y) = Pixel::Foreground;
      }
    }
  }
}

std::vector<Point> trace_contour(const BinaryMask& mask, Point start) {
  std::vector<Point> contour{start};
  Point current = start;
  int backtrack = 0;  // west of the topmost-leftmost pixel is always background
  std::optional<Point> first_step;

  while (true) {
    std::optional<Point> next;
    int dir = 0;
    for (int i = 1; i <= 8; ++i) {
      dir = (backtrack + i) % 8;
      const Point cand{current.x + kMoore[dir].x, current.y + kMoore[dir].y};
      if (is_foreground(mask, cand.x, cand.y)) {
        next = cand;
        break;
      }
    }
    if (!next) break;  // isolated pixel

    if (current == start && first_step && *next == *first_step) break;
    if (!first_step) first_step = next;

    const Point& prev_dir = kMoore[(dir + 7) % 8];
    const Point behind{current.x + prev_dir.x, current.y + prev_dir.y};
    backtrack = moore_index({behind.x - next->x, behind.y - next->y});
    current = *next;
    contour.push_back(current);
  }
  if (contour.size() > 1 && contour.back() == start) contour.pop_back();
  return contour;
}

std::vector<SeedRegion> connected_components(const BinaryMask& mask) {
  const int w = mask.width();
  const int h = mask.height();
  Grid<int> labels(w, h, 0);
  std::vector<SeedRegion> regions;
  std::vector<Point> stack;

  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (mask.at(x, y) != Pixel::Foreground || labels.at(x, y) != 0) continue;

      SeedRegion region;
      region.label = static_cast<int>(regions.size()) + 1;
      labels.at(x, y) = region.label;
      stack.assign(1, Point{x, y});
      while (!stack.empty()) {
        const Point p = stack.back();
        stack.pop_back();
        region.pixels.push_back(p);
        for (const Point d : kMoore) {
          const int nx = p.x + d.x;
          const int ny = p.y + d.y;
          if (is_foreground(mask, nx, ny) && labels.at(nx, ny) == 0) {
            labels.at(nx, ny) = region.label;
            stack.push_back({nx, ny});
          }
        }
      }
      std::ranges::sort(region.pixels, raster_less);

      BoundingBox box{x, y, x, y};
      double sx = 0.0;
      double sy = 0.0;
      for (const Point p : region.pixels) {
        box.x_min = std::min(box.x_min, p.x);
        box.x_max = std::max(box.x_max, p.x);
        box.y_min = std::min(box.y_min, p.y);
        box.y_max = std::max(box.y_max, p.y);
        sx += p.x;
        sy += p.y;
      }
      const auto n = static_cast<double>(region.pixels.size());
      region.bbox = box;
      region.centroid = {sx / n, sy / n};
      region.contour = trace_contour(mask, region.pixels.front());
      regions.push_back(std::move(region));
    }
  }
  return regions;
}

double filter_circularity(const SeedRegion& region) {
  return std::clamp(morph::circularity(region), 0.0, 1.0);
}

std::vector<SeedRegion> filter_regions(std::span<const SeedRegion> regions, const RegionFilter& f) {
  f.validate();
  std::vector<SeedRegion> kept;
  for (const SeedRegion& r : regions) {
    const auto area = static_cast<double>(r.area());
    if (area < f.min_area || area > f.max_area) continue;
    const double circ = filter_circularity(r);
    if (circ < f.circ_min || circ > f.circ_max) continue;
    kept.push_back(r);
  }
  return kept;
}

RegionCrop crop_region(const RgbRaster& img, const BinaryMask& mask, const SeedRegion& region,
                       int pad) {
  if (!img.same_shape(mask)) {
    throw Error(ErrorKind::DimensionMismatch, "image and mask dimensions differ");
  }
  if (pad < 0) throw Error(ErrorKind::InvalidArgument, "crop padding must be non-negative");
  const BoundingBox& b = region.bbox;
  if (!mask.contains(b.x_min, b.y_min) || !mask.contains(b.x_max, b.y_max)) {
    throw Error(ErrorKind::DimensionMismatch, "region lies outside the mask");
  }
  const int x0 = std::max(0, b.x_min - pad);
  const int y0 = std::max(0, b.y_min - pad);
  const int x1 = std::min(img.width() - 1, b.x_max + pad);
  const int y1 = std::min(img.height() - 1, b.y_max + pad);

  RegionCrop crop{RgbRaster(x1 - x0 + 1, y1 - y0 + 1), BinaryMask(x1 - x0 + 1, y1 - y0 + 1),
                  Point{x0, y0}};
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) crop.image.at(x - x0, y - y0) = img.at(x, y);
  }
  for (const Point p : region.pixels) crop.mask.at(p.x - x0, p.y - y0) = Pixel::Foreground;
  return crop;
}

BinaryMask mask_from_regions(int width, int height, std::span<const SeedRegion> regions) {
  BinaryMask mask(width, height);
  for (const SeedRegion& r : regions) {
    for (const Point p : r.pixels) mask.at(p.x, p.y) = Pixel::Foreground;
  }
  return mask;
}

SeedRegion translate(const SeedRegion& region, Point offset) {
  SeedRegion out = region;
  auto shift = [&](Point& p) {
    p.x += offset.x;
    p.y += offset.y;
  };
  std::ranges::for_each(out.pixels, shift);
  std::ranges::for_each(out.contour, shift);
  out.bbox = {region.bbox.x_min + offset.x, region.bbox.y_min + offset.y,
              region.bbox.x_max + offset.x, region.bbox.y_max + offset.y};
  out.centroid = {region.centroid.x + offset.x, region.centroid.y + offset.y};
  return out;
}

}  // namespace seedlab::segmentation
