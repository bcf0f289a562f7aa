#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "seedlab/error.hpp"

namespace seedlab {

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  friend bool operator==(const Rgb&, const Rgb&) = default;
};

/// Integer pixel coordinate; x grows rightwards, y grows downwards.
struct Point {
  int x = 0;
  int y = 0;

  friend bool operator==(const Point&, const Point&) = default;
  friend auto operator<=>(const Point&, const Point&) = default;
};

enum class Pixel : std::uint8_t { Background = 0, Foreground = 1 };

/// Row-major pixel grid. Dimensions are fixed at construction and always
/// positive; the pixel count always equals width * height.
template <typename T>
class Grid {
 public:
  using value_type = T;

  Grid(int width, int height, T fill = T{}) : width_(width), height_(height) {
    if (width < 1 || height < 1) {
      throw Error(ErrorKind::InvalidArgument, "grid dimensions must be positive");
    }
    data_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
  }

  Grid(int width, int height, std::vector<T> pixels) : width_(width), height_(height) {
    if (width < 1 || height < 1) {
      throw Error(ErrorKind::InvalidArgument, "grid dimensions must be positive");
    }
    if (pixels.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
      throw Error(ErrorKind::DimensionMismatch, "pixel count does not match width * height");
    }
    data_ = std::move(pixels);
  }

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return data_.size(); }

  bool contains(int x, int y) const noexcept {
    return x >= 0 && y >= 0 && x < width_ && y < height_;
  }

  const T& at(int x, int y) const noexcept { return data_[index(x, y)]; }
  T& at(int x, int y) noexcept { return data_[index(x, y)]; }

  std::span<const T> pixels() const noexcept { return data_; }
  std::span<T> pixels() noexcept { return data_; }

  bool same_shape(int w, int h) const noexcept { return w == width_ && h == height_; }
  template <typename U>
  bool same_shape(const Grid<U>& other) const noexcept {
    return other.width() == width_ && other.height() == height_;
  }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  int width_;
  int height_;
  std::vector<T> data_;
};

using RgbRaster = Grid<Rgb>;
using GrayRaster = Grid<std::uint8_t>;
using BinaryMask = Grid<Pixel>;

inline bool is_foreground(const BinaryMask& mask, int x, int y) noexcept {
  return mask.contains(x, y) && mask.at(x, y) == Pixel::Foreground;
}

std::size_t foreground_count(const BinaryMask& mask) noexcept;

/// Hue is scaled so that a full turn is 1.0; h is 0 whenever s is 0.
struct HsvPixel {
  double h = 0.0;
  double s = 0.0;
  double v = 0.0;
};

/// round(0.299 R + 0.587 G + 0.114 B)
std::uint8_t luma(Rgb p) noexcept;
GrayRaster to_gray(const RgbRaster& img);

HsvPixel rgb_to_hsv(Rgb p) noexcept;
Rgb hsv_to_rgb(const HsvPixel& p) noexcept;

}  // namespace seedlab
