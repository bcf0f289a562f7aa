#pragma once

// Brute-force reference implementations. Each one is written from the
// definition, independently of the library code it checks.

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <span>
#include <vector>

#include "seedlab/dataset.hpp"
#include "seedlab/raster.hpp"

namespace oracle {

using namespace seedlab;

inline double dist(Point a, Point b) {
  const long long dx = a.x - b.x, dy = a.y - b.y;
  return std::sqrt(static_cast<double>(dx * dx + dy * dy));
}

/// Largest pairwise distance, O(n^2).
inline double max_pairwise(std::span<const Point> pts) {
  double best = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) best = std::max(best, dist(pts[i], pts[j]));
  }
  return best;
}

/// Extent of the points projected on the unit normal of a->b.
inline double perpendicular_extent(std::span<const Point> pts, Point a, Point b) {
  const double len = dist(a, b);
  const double nx = -(b.y - a.y) / len, ny = (b.x - a.x) / len;
  double lo = INFINITY, hi = -INFINITY;
  for (const auto& p : pts) {
    const double t = p.x * nx + p.y * ny;
    lo = std::min(lo, t);
    hi = std::max(hi, t);
  }
  return hi - lo;
}

inline long long cross(Point o, Point a, Point b) {
  return static_cast<long long>(a.x - o.x) * (b.y - o.y) - static_cast<long long>(a.y - o.y) * (b.x - o.x);
}

/// Hull vertices as a sorted set: a point is a vertex unless it lies in a
/// closed triangle of three other points or on a segment between two others.
inline std::vector<Point> hull_vertices(std::vector<Point> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  std::vector<Point> out;
  const std::size_t n = pts.size();
  for (std::size_t p = 0; p < n; ++p) {
    bool inside = false;
    for (std::size_t a = 0; a < n && !inside; ++a) {
      if (a == p) continue;
      for (std::size_t b = a + 1; b < n && !inside; ++b) {
        if (b == p) continue;
        // On segment ab?
        if (cross(pts[a], pts[b], pts[p]) == 0 &&
            std::min(pts[a].x, pts[b].x) <= pts[p].x && pts[p].x <= std::max(pts[a].x, pts[b].x) &&
            std::min(pts[a].y, pts[b].y) <= pts[p].y && pts[p].y <= std::max(pts[a].y, pts[b].y)) {
          inside = true;
          break;
        }
        for (std::size_t c = b + 1; c < n && !inside; ++c) {
          if (c == p) continue;
          const long long d1 = cross(pts[a], pts[b], pts[p]);
          const long long d2 = cross(pts[b], pts[c], pts[p]);
          const long long d3 = cross(pts[c], pts[a], pts[p]);
          const bool neg = d1 < 0 || d2 < 0 || d3 < 0;
          const bool pos = d1 > 0 || d2 > 0 || d3 > 0;
          if (!(neg && pos) && cross(pts[a], pts[b], pts[c]) != 0) inside = true;
        }
      }
    }
    if (!inside) out.push_back(pts[p]);
  }
  return out;
}

/// Symmetric normalised co-occurrence probabilities by direct pair
/// enumeration, keyed by (i, j); absent cells are zero.
using SparseGlcm = std::map<std::pair<int, int>, double>;

inline SparseGlcm glcm(const GrayRaster& g, const BinaryMask& m, int dx, int dy, int levels) {
  SparseGlcm p;
  double total = 0;
  for (int y = 0; y < g.height(); ++y) {
    for (int x = 0; x < g.width(); ++x) {
      const int x2 = x + dx, y2 = y + dy;
      if (!g.contains(x2, y2)) continue;
      if (m.at(x, y) != Pixel::Foreground || m.at(x2, y2) != Pixel::Foreground) continue;
      const int i = g.at(x, y) * levels / 256, j = g.at(x2, y2) * levels / 256;
      p[{i, j}] += 1;
      p[{j, i}] += 1;
      total += 2;
    }
  }
  for (auto& [cell, v] : p) v /= total;
  return p;
}

inline double cell(const SparseGlcm& p, int i, int j) {
  const auto it = p.find({i, j});
  return it == p.end() ? 0.0 : it->second;
}

struct Haralick {
  double energy = 0, contrast = 0, correlation = 0, homogeneity = 0;
};

inline Haralick haralick(const SparseGlcm& p) {
  Haralick h;
  double mu = 0;
  for (const auto& [c, v] : p) mu += c.first * v;
  double var = 0, cov = 0;
  for (const auto& [c, v] : p) {
    const auto [i, j] = c;
    h.energy += v * v;
    h.contrast += double(i - j) * (i - j) * v;
    h.homogeneity += v / (1.0 + std::abs(i - j));
    var += (i - mu) * (i - mu) * v;
    cov += (i - mu) * (j - mu) * v;
  }
  h.correlation = var > 0 ? cov / var : 1.0;
  return h;
}

struct FirstOrder {
  double min, max, mean, std, median, mode, skewness, kurtosis, sum, uniformity, entropy, smoothness;
};

/// Direct summation over the list of foreground gray values.
inline FirstOrder first_order(std::vector<int> v) {
  FirstOrder f{};
  std::sort(v.begin(), v.end());
  const double n = static_cast<double>(v.size());
  f.min = v.front();
  f.max = v.back();
  f.sum = std::accumulate(v.begin(), v.end(), 0.0);
  f.mean = f.sum / n;
  double m2 = 0, m3 = 0, m4 = 0;
  for (const int x : v) {
    const double d = x - f.mean;
    m2 += d * d;
    m3 += d * d * d;
    m4 += d * d * d * d;
  }
  m2 /= n;
  m3 /= n;
  m4 /= n;
  f.std = std::sqrt(m2);
  f.median = v[(v.size() - 1) / 2];
  std::map<int, int> counts;
  for (const int x : v) ++counts[x];
  int best = -1;
  for (const auto& [level, c] : counts) {
    if (c > best) {
      best = c;
      f.mode = level;
    }
  }
  f.skewness = m2 > 0 ? m3 / std::pow(m2, 1.5) : 0.0;
  f.kurtosis = m2 > 0 ? m4 / (m2 * m2) - 3.0 : 0.0;
  for (const auto& [level, c] : counts) {
    const double p = c / n;
    f.uniformity += p * p;
    f.entropy -= p * std::log2(p);
  }
  f.smoothness = 1.0 - 1.0 / (1.0 + m2 / (255.0 * 255.0));
  return f;
}

/// Macro one-vs-rest AUC by counting every (positive, negative) pair.
inline double auc_pairs(const Matrix& s, std::span<const int> y) {
  double sum = 0;
  int evaluated = 0;
  for (std::size_t c = 0; c < s.cols(); ++c) {
    long long twice = 0, pos = 0, neg = 0;
    for (std::size_t i = 0; i < s.rows(); ++i) (static_cast<std::size_t>(y[i]) == c ? pos : neg)++;
    if (pos == 0 || neg == 0) continue;
    for (std::size_t i = 0; i < s.rows(); ++i) {
      if (static_cast<std::size_t>(y[i]) != c) continue;
      for (std::size_t j = 0; j < s.rows(); ++j) {
        if (static_cast<std::size_t>(y[j]) == c) continue;
        twice += s(i, c) > s(j, c) ? 2 : s(i, c) == s(j, c) ? 1 : 0;
      }
    }
    sum += static_cast<double>(twice) / (2.0 * static_cast<double>(pos) * static_cast<double>(neg));
    ++evaluated;
  }
  return sum / evaluated;
}

/// Closed-polyline step sum of a contour.
inline double step_sum(std::span<const Point> c) {
  if (c.size() == 1) return 4.0;
  double total = 0;
  for (std::size_t i = 0; i < c.size(); ++i) total += dist(c[i], c[(i + 1) % c.size()]);
  return total;
}

}  // namespace oracle
