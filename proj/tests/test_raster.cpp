#include <doctest.h>

#include <cmath>
#include <cstdlib>

#include "seedlab/raster.hpp"

using namespace seedlab;

TEST_CASE("grid dimensions are validated") {
  CHECK_THROWS_AS(GrayRaster(0, 3), Error);
  CHECK_THROWS_AS(GrayRaster(3, -1), Error);
  CHECK_THROWS_AS(GrayRaster(2, 2, std::vector<std::uint8_t>(3)), Error);
  const GrayRaster g(4, 3, std::uint8_t{7});
  CHECK(g.size() == 12);
  CHECK(g.at(3, 2) == 7);
}

TEST_CASE("to_gray uses rounded luma weights") {
  CHECK(luma({0, 0, 0}) == 0);
  CHECK(luma({255, 255, 255}) == 255);
  CHECK(luma({100, 200, 50}) == 153);

  RgbRaster img(2, 1);
  img.at(0, 0) = {100, 200, 50};
  img.at(1, 0) = {255, 255, 255};
  const auto g = to_gray(img);
  CHECK(g.same_shape(img));
  CHECK(g.at(0, 0) == 153);
  CHECK(g.at(1, 0) == 255);
}

TEST_CASE("to_gray matches the formula on a subsampled cube") {
  for (int r = 0; r < 256; r += 5) {
    for (int g = 0; g < 256; g += 7) {
      for (int b = 0; b < 256; b += 3) {
        const double y = 0.299 * r + 0.587 * g + 0.114 * b;
        CHECK(luma(Rgb{std::uint8_t(r), std::uint8_t(g), std::uint8_t(b)}) == std::lround(y));
      }
    }
  }
}

TEST_CASE("to_gray is monotone in every channel") {
  std::srand(3);
  for (int t = 0; t < 20000; ++t) {
    const Rgb a{std::uint8_t(std::rand() % 256), std::uint8_t(std::rand() % 256),
                std::uint8_t(std::rand() % 256)};
    const Rgb b{std::uint8_t(a.r - std::rand() % (a.r + 1)), std::uint8_t(a.g - std::rand() % (a.g + 1)),
                std::uint8_t(a.b - std::rand() % (a.b + 1))};
    CHECK(luma(a) >= luma(b));
  }
}

TEST_CASE("rgb_to_hsv examples") {
  auto h = rgb_to_hsv({255, 0, 0});
  CHECK(h.h == 0.0);
  CHECK(h.s == 1.0);
  CHECK(h.v == 1.0);

  h = rgb_to_hsv({128, 128, 128});
  CHECK(h.h == 0.0);
  CHECK(h.s == 0.0);
  CHECK(h.v == doctest::Approx(0.502).epsilon(0.001));

  h = rgb_to_hsv({0, 0, 255});
  CHECK(h.h == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(h.s == 1.0);
  CHECK(h.v == 1.0);
}

TEST_CASE("hsv components stay in range and the inverse round-trips within 1") {
  for (int r = 0; r < 256; r += 8) {
    for (int g = 0; g < 256; g += 8) {
      for (int b = 0; b < 256; b += 8) {
        const Rgb p{std::uint8_t(r), std::uint8_t(g), std::uint8_t(b)};
        const auto h = rgb_to_hsv(p);
        REQUIRE(h.h >= 0.0);
        REQUIRE(h.h < 1.0);
        REQUIRE(h.s >= 0.0);
        REQUIRE(h.s <= 1.0);
        REQUIRE(h.v >= 0.0);
        REQUIRE(h.v <= 1.0);
        const auto q = hsv_to_rgb(h);
        CHECK(std::abs(int(q.r) - r) <= 1);
        CHECK(std::abs(int(q.g) - g) <= 1);
        CHECK(std::abs(int(q.b) - b) <= 1);
      }
    }
  }
}
