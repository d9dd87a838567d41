#include <doctest.h>

#include <cmath>

#include "ddp/errors.hpp"
#include "ddp/raster_ops.hpp"
#include "support.hpp"

using namespace ddp;
using raster::Raster;
using raster::Rect;
using raster::Rgb;

namespace {

int changed(const Raster& a, const Raster& b) {
  int n = 0;
  for (int y = 0; y < a.height(); ++y) {
    for (int x = 0; x < a.width(); ++x) n += a.at(x, y) == b.at(x, y) ? 0 : 1;
  }
  return n;
}

const Rgb kBlack{0, 0, 0};

}  // namespace

TEST_CASE("red box outlines the rect") {
  const Raster black(10, 10, kBlack);
  const Raster full = raster::draw_red_box(black, Rect{0, 0, 10, 10}, 1);
  CHECK(changed(black, full) == 2 * 10 + 2 * 10 - 4);

  const Raster inner = raster::draw_red_box(black, Rect{2, 2, 4, 4}, 1);
  CHECK(changed(black, inner) == 12);
  for (int y = 0; y < 10; ++y) {
    for (int x = 0; x < 10; ++x) {
      const bool in_rect = x >= 2 && x < 6 && y >= 2 && y < 6;
      const bool border = in_rect && (x == 2 || x == 5 || y == 2 || y == 5);
      CHECK(inner.at(x, y) == (border ? raster::kRed : kBlack));
    }
  }

  const Raster filled = raster::draw_red_box(black, Rect{1, 1, 6, 4}, 2);
  CHECK(changed(black, filled) == 24);
  CHECK_THROWS_AS((void)raster::draw_red_box(black, Rect{5, 5, 6, 2}, 1), OutOfBounds);
  CHECK_THROWS_AS((void)raster::draw_red_box(black, Rect{0, 0, 3, 3}, 0), InvalidArgument);
}

TEST_CASE("cartesian lines recolor whole rows and columns") {
  const Raster base(80, 64, kBlack);
  const raster::LineSpec row{raster::Orientation::kHorizontal, 10, 1, raster::kGreen};
  const Raster one = raster::draw_cartesian_auxlines(base, std::span(&row, 1));
  CHECK(changed(base, one) == 80);
  for (int x = 0; x < 80; ++x) CHECK(one.at(x, 10) == raster::kGreen);

  CHECK(raster::draw_cartesian_auxlines(base, {}) == base);

  const raster::LineSpec col{raster::Orientation::kVertical, 0, 2, raster::kGreen};
  const Raster two = raster::draw_cartesian_auxlines(base, std::span(&col, 1));
  CHECK(changed(base, two) == 2 * 64);
  for (int y = 0; y < 64; ++y) {
    CHECK(two.at(0, y) == raster::kGreen);
    CHECK(two.at(1, y) == raster::kGreen);
  }

  const std::vector<raster::LineSpec> both = {
      {raster::Orientation::kHorizontal, 5, 1, raster::kGreen},
      {raster::Orientation::kVertical, 7, 1, raster::kRed}};
  const Raster crossed = raster::draw_cartesian_auxlines(base, both);
  CHECK(crossed.at(7, 5) == raster::kRed);

  const raster::LineSpec bad{raster::Orientation::kHorizontal, 64, 1};
  CHECK_THROWS_AS((void)raster::draw_cartesian_auxlines(base, std::span(&bad, 1)), OutOfBounds);
}

TEST_CASE("polar spokes follow the axes") {
  const Raster base(80, 64, kBlack);
  raster::PolarSpec right{40, 32, {}, {0.0}, 10.0, 1, raster::kGreen};
  const Raster r = raster::draw_polar_auxlines(base, right);
  CHECK(changed(base, r) == 11);
  for (int x = 40; x <= 50; ++x) CHECK(r.at(x, 32) == raster::kGreen);

  raster::PolarSpec up{40, 32, {}, {90.0}, 10.0, 1, raster::kGreen};
  const Raster u = raster::draw_polar_auxlines(base, up);
  CHECK(changed(base, u) == 11);
  for (int y = 22; y <= 32; ++y) CHECK(u.at(40, y) == raster::kGreen);

  raster::PolarSpec dot{40, 32, {}, {0.0}, 0.0, 1, raster::kGreen};
  const Raster d = raster::draw_polar_auxlines(base, dot);
  CHECK(changed(base, d) == 1);
  CHECK(d.at(40, 32) == raster::kGreen);

  CHECK_THROWS_AS((void)raster::draw_polar_auxlines(base, raster::PolarSpec{80, 0, {3.0}, {}, 0}),
                  OutOfBounds);
  CHECK_THROWS_AS((void)raster::draw_polar_auxlines(base, raster::PolarSpec{4, 4, {}, {}, 0}),
                  InvalidArgument);
  CHECK_THROWS_AS((void)raster::draw_polar_auxlines(base, raster::PolarSpec{4, 4, {-1.0}, {}, 0}),
                  InvalidArgument);
}

TEST_CASE("polar circles stay within the thickness band") {
  const Raster base(120, 100, kBlack);
  for (int t : {1, 2, 3}) {
    raster::PolarSpec spec{60, 50, {10.0, 25.5, 70.0}, {}, 0.0, t, raster::kGreen};
    const Raster out = raster::draw_polar_auxlines(base, spec);
    int hits = 0;
    for (int y = 0; y < 100; ++y) {
      for (int x = 0; x < 120; ++x) {
        if (out.at(x, y) == kBlack) continue;
        ++hits;
        const double d = std::hypot(x - 60.0, y - 50.0);
        double best = 1e9;
        for (double r : spec.radii) best = std::min(best, std::abs(d - r));
        CHECK(best <= t / 2.0 + 0.5);
      }
    }
    CHECK(hits > 0);
    // Every in-bounds point on each ideal circle has a recolored pixel among
    // the four pixel centres around it.
    for (double r : spec.radii) {
      for (int k = 0; k < 720; ++k) {
        const double a = k * M_PI / 360.0;
        const double px = 60 + r * std::cos(a), py = 50 - r * std::sin(a);
        const int x0 = static_cast<int>(std::floor(px)), y0 = static_cast<int>(std::floor(py));
        if (!out.contains(x0, y0) || !out.contains(x0 + 1, y0 + 1)) continue;
        bool hit = false;
        for (int dy = 0; dy <= 1; ++dy) {
          for (int dx = 0; dx <= 1; ++dx) hit = hit || out.at(x0 + dx, y0 + dy) == raster::kGreen;
        }
        CHECK(hit);
      }
    }
  }
}

TEST_CASE("golden tool outputs on the occluded-dog scene") {
  const Raster scene = raster::read_image_file(ddp::test::fixture("occluded_dog.png"));
  REQUIRE(scene == ddp::test::occluded_dog_scene());
  const Raster img150 = raster::downsample_max_dim(raster::gaussian_smooth(scene, 1.0), 150);
  CHECK(img150 == raster::read_image_file(ddp::test::fixture("golden_dog_150.png")));
  CHECK(raster::downsample_max_dim(img150, 80) ==
        raster::read_image_file(ddp::test::fixture("golden_dog_80.png")));
  CHECK(raster::apply_blur_mask(img150, Rect{60, 50, 30, 40}, 6.0) ==
        raster::read_image_file(ddp::test::fixture("golden_dog_blur.png")));
  CHECK(raster::enhance_contrast(img150) ==
        raster::read_image_file(ddp::test::fixture("golden_dog_contrast.png")));
  raster::PolarSpec polar{75, 60, {20, 40}, {0, 45, 90, 180}, 50, 2, raster::kGreen};
  CHECK(raster::draw_polar_auxlines(img150, polar) ==
        raster::read_image_file(ddp::test::fixture("golden_dog_polar.png")));
}
