// Regenerates the binary fixtures under tests/fixtures.
#include <iostream>

#include "ddp/raster_ops.hpp"
#include "support.hpp"

int main(int argc, char** argv) {
  using namespace ddp;
  const std::string dir = argc > 1 ? argv[1] : DDP_FIXTURE_DIR;
  const raster::Raster scene = test::occluded_dog_scene();
  raster::write_png_file(scene, dir + "/occluded_dog.png");

  const raster::Raster base = raster::gaussian_smooth(scene, raster::kDefaultSigma1);
  const raster::Raster img150 = raster::downsample_max_dim(base, 150);
  raster::write_png_file(img150, dir + "/golden_dog_150.png");
  raster::write_png_file(raster::downsample_max_dim(img150, 80), dir + "/golden_dog_80.png");
  raster::write_png_file(raster::apply_blur_mask(img150, raster::Rect{60, 50, 30, 40}, 6.0),
                         dir + "/golden_dog_blur.png");
  raster::write_png_file(raster::enhance_contrast(img150), dir + "/golden_dog_contrast.png");
  raster::PolarSpec polar{75, 60, {20, 40}, {0, 45, 90, 180}, 50, 2, raster::kGreen};
  raster::write_png_file(raster::draw_polar_auxlines(img150, polar), dir + "/golden_dog_polar.png");
  std::cout << "fixtures written to " << dir << '\n';
  return 0;
}
