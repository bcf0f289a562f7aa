#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "seedlab/features.hpp"
#include "support/synth.hpp"

using namespace seedlab;
using namespace seedlab::color;

namespace {

RgbRaster random_rgb(int w, int h, std::mt19937_64& rng) {
  RgbRaster img(w, h);
  std::uniform_int_distribution<int> d(0, 255);
  for (auto& p : img.pixels()) {
    p = {static_cast<std::uint8_t>(d(rng)), static_cast<std::uint8_t>(d(rng)),
         static_cast<std::uint8_t>(d(rng))};
  }
  return img;
}

// Naive HSV straight from the hexcone definition.
std::array<double, 3> hsv_oracle(Rgb p) {
  const double r = p.r / 255.0, g = p.g / 255.0, b = p.b / 255.0;
  const double mx = std::max({r, g, b}), mn = std::min({r, g, b});
  const double c = mx - mn;
  double h = 0.0;
  if (c > 0) {
    if (mx == r) {
      h = std::fmod((g - b) / c + 6.0, 6.0);
    } else if (mx == g) {
      h = (b - r) / c + 2.0;
    } else {
      h = (r - g) / c + 4.0;
    }
    h /= 6.0;
  }
  return {h, mx > 0 ? c / mx : 0.0, mx};
}

std::array<double, 16> color_oracle(const RgbRaster& img, const BinaryMask& m) {
  std::vector<std::array<double, 6>> rows;
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      if (m.at(x, y) != Pixel::Foreground) continue;
      const Rgb p = img.at(x, y);
      const auto hsv = hsv_oracle(p);
      rows.push_back({double(p.r), double(p.g), double(p.b), hsv[0], hsv[1], hsv[2]});
    }
  }
  std::array<double, 6> mean{}, sd{};
  for (std::size_t c = 0; c < 6; ++c) {
    double s = 0;
    for (const auto& r : rows) s += r[c];
    mean[c] = s / rows.size();
    double ss = 0;
    for (const auto& r : rows) ss += (r[c] - mean[c]) * (r[c] - mean[c]);
    sd[c] = std::sqrt(ss / rows.size());
  }
  return {mean[0], sd[0], std::sqrt(mean[0]), mean[1], sd[1], std::sqrt(mean[1]),
          mean[2], sd[2], std::sqrt(mean[2]), (mean[0] + mean[1] + mean[2]) / 3,
          mean[3], sd[3], mean[4], sd[4], mean[5], sd[5]};
}

}  // namespace

TEST_CASE("constant region") {
  const BinaryMask m(6, 5, Pixel::Foreground);
  const RgbRaster img(6, 5, Rgb{100, 150, 200});
  const auto f = extract_color(img, m);
  CHECK(f.mean_r == 100);
  CHECK(f.mean_g == 150);
  CHECK(f.mean_b == 200);
  CHECK(f.mean_rgb == 150);
  CHECK(f.sqrt_mean_r == 10);
  for (double s : {f.std_r, f.std_g, f.std_b, f.std_hue, f.std_sat, f.std_val}) CHECK(s == 0);
}

TEST_CASE("black and white halves") {
  RgbRaster img(2, 1);
  img.at(0, 0) = {0, 0, 0};
  img.at(1, 0) = {255, 255, 255};
  const auto f = extract_color(img, BinaryMask(2, 1, Pixel::Foreground));
  CHECK(f.mean_rgb == 127.5);
  CHECK(f.std_r == 127.5);
  CHECK(f.mean_sat == 0);
  CHECK(f.mean_val == doctest::Approx(0.5));
}

TEST_CASE("matches naive oracle on random patches") {
  std::mt19937_64 rng(11);
  for (int it = 0; it < 500; ++it) {
    const int w = 1 + static_cast<int>(rng() % 8), h = 1 + static_cast<int>(rng() % 8);
    const auto img = random_rgb(w, h, rng);
    auto m = synth::random_mask(w, h, 0.6, rng);
    m.at(0, 0) = Pixel::Foreground;
    const auto got = extract_color(img, m).values();
    const auto want = color_oracle(img, m);
    for (std::size_t i = 0; i < got.size(); ++i) {
      INFO("feature " << ColorFeatures::names()[i]);
      CHECK(std::abs(got[i] - want[i]) <= 1e-9);
    }
  }
}

TEST_CASE("type invariants") {
  std::mt19937_64 rng(12);
  for (int it = 0; it < 300; ++it) {
    const auto img = random_rgb(7, 7, rng);
    auto m = synth::random_mask(7, 7, 0.5, rng);
    m.at(3, 3) = Pixel::Foreground;
    const auto f = extract_color(img, m);
    CHECK(f.mean_rgb == (f.mean_r + f.mean_g + f.mean_b) / 3.0);
    CHECK(f.sqrt_mean_r == std::sqrt(f.mean_r));
    CHECK(f.sqrt_mean_g == std::sqrt(f.mean_g));
    CHECK(f.sqrt_mean_b == std::sqrt(f.mean_b));
    for (double s : {f.std_r, f.std_g, f.std_b, f.std_hue, f.std_sat, f.std_val}) CHECK(s >= 0);
    for (double v : {f.mean_hue, f.mean_sat, f.mean_val}) {
      CHECK(v >= 0);
      CHECK(v <= 1);
    }
  }
}

TEST_CASE("permutation of foreground pixels") {
  std::mt19937_64 rng(13);
  for (int it = 0; it < 100; ++it) {
    const auto img = random_rgb(9, 9, rng);
    const BinaryMask m(9, 9, Pixel::Foreground);
    std::vector<Rgb> px(img.pixels().begin(), img.pixels().end());
    std::shuffle(px.begin(), px.end(), rng);
    const RgbRaster shuffled(9, 9, px);
    const auto a = extract_color(img, m).values();
    const auto b = extract_color(shuffled, m).values();
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-12));
  }
}

TEST_CASE("swapping red and blue swaps their statistics") {
  std::mt19937_64 rng(14);
  for (int it = 0; it < 100; ++it) {
    const auto img = random_rgb(8, 6, rng);
    auto m = synth::random_mask(8, 6, 0.5, rng);
    m.at(1, 1) = Pixel::Foreground;
    RgbRaster swapped = img;
    for (auto& p : swapped.pixels()) std::swap(p.r, p.b);
    const auto a = extract_color(img, m);
    const auto b = extract_color(swapped, m);
    CHECK(a.mean_r == b.mean_b);
    CHECK(a.std_r == b.std_b);
    CHECK(a.sqrt_mean_r == b.sqrt_mean_b);
    CHECK(a.mean_b == b.mean_r);
    CHECK(a.std_b == b.std_r);
    CHECK(a.sqrt_mean_b == b.sqrt_mean_r);
    CHECK(a.mean_rgb == doctest::Approx(b.mean_rgb).epsilon(1e-15));
  }
}

TEST_CASE("achromatic images") {
  std::mt19937_64 rng(15);
  for (int it = 0; it < 100; ++it) {
    RgbRaster img(6, 6);
    for (auto& p : img.pixels()) {
      const auto v = static_cast<std::uint8_t>(rng() % 256);
      p = {v, v, v};
    }
    const auto f = extract_color(img, BinaryMask(6, 6, Pixel::Foreground));
    CHECK(f.mean_sat == 0);
    CHECK(std::abs(f.mean_val - f.mean_rgb / 255.0) <= 1e-9);
  }
}

TEST_CASE("errors") {
  const RgbRaster img(3, 3, Rgb{1, 2, 3});
  try {
    (void)extract_color(img, BinaryMask(3, 3));
    FAIL("expected EmptyRegion");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::EmptyRegion);
  }
  try {
    (void)extract_color(img, BinaryMask(3, 4, Pixel::Foreground));
    FAIL("expected DimensionMismatch");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DimensionMismatch);
  }
}

TEST_CASE("category arities and names") {
  CHECK(category_arity(FeatureCategory::Morph) == 32);
  CHECK(category_arity(FeatureCategory::Texture) == 16);
  CHECK(category_arity(FeatureCategory::Color) == 16);
  CHECK(category_arity(FeatureCategory::All) == 64);
  for (const auto c : category_combinations()) {
    const auto names = feature_names(c);
    CHECK(names.size() == category_arity(c));
    std::set<std::string> unique(names.begin(), names.end());
    CHECK(unique.size() == names.size());
  }
  CHECK(parse_categories("color") == FeatureCategory::Color);
  CHECK(parse_categories(" Morph , colour") == (FeatureCategory::Morph | FeatureCategory::Color));
  CHECK(parse_categories("all") == FeatureCategory::All);
  CHECK_THROWS_AS(parse_categories("shape"), Error);
  CHECK_THROWS_AS(parse_categories(""), Error);
  CHECK(to_string(FeatureCategory::Texture | FeatureCategory::Color) == "texture+color");
}

TEST_CASE("analysed seeds yield the selected columns") {
  BinaryMask m(80, 60);
  for (const auto& d : {synth::disc_mask(80, 60, 20, 30, 10), synth::ellipse_mask(80, 60, 55, 30, 14, 8, 0.3)}) {
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (d.pixels()[i] == Pixel::Foreground) m.pixels()[i] = Pixel::Foreground;
    }
  }
  const auto img = synth::paint(m, Rgb{180, 140, 60}, Rgb{20, 40, 220});
  segmentation::RegionFilterOverrides o;
  o.min_area = 50;
  const auto a = analyse_image(img, o.resolve(80, 60));
  REQUIRE(a.seeds.size() == 2);
  for (const auto& s : a.seeds) {
    for (const auto c : category_combinations()) CHECK(s.features.select(c).size() == category_arity(c));
    const auto all = s.features.select(FeatureCategory::All);
    const auto col = s.features.select(FeatureCategory::Color);
    CHECK(std::equal(col.begin(), col.end(), all.end() - 16));
    CHECK(s.features.color.mean_r == doctest::Approx(180));
  }
}
