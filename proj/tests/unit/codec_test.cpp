#include <doctest.h>

#include <png.h>
#include <cstdio>
#include <jpeglib.h>

#include <random>

#include "ddp/errors.hpp"
#include "ddp/raster_ops.hpp"
#include "support.hpp"

using namespace ddp;
using raster::Raster;

namespace {

std::vector<std::uint8_t> rgba_png(int w, int h, const std::vector<std::uint8_t>& rgba) {
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(w);
  image.height = static_cast<png_uint_32>(h);
  image.format = PNG_FORMAT_RGBA;
  png_alloc_size_t size = 0;
  REQUIRE(png_image_write_to_memory(&image, nullptr, &size, 0, rgba.data(), 0, nullptr));
  std::vector<std::uint8_t> out(size);
  REQUIRE(png_image_write_to_memory(&image, out.data(), &size, 0, rgba.data(), 0, nullptr));
  out.resize(size);
  return out;
}

std::vector<std::uint8_t> jpeg_bytes(const Raster& img, int quality) {
  jpeg_compress_struct cinfo{};
  jpeg_error_mgr jerr{};
  cinfo.err = jpeg_std_error(&jerr);
  jpeg_create_compress(&cinfo);
  unsigned char* buffer = nullptr;
  unsigned long size = 0;
  jpeg_mem_dest(&cinfo, &buffer, &size);
  cinfo.image_width = static_cast<JDIMENSION>(img.width());
  cinfo.image_height = static_cast<JDIMENSION>(img.height());
  cinfo.input_components = 3;
  cinfo.in_color_space = JCS_RGB;
  jpeg_set_defaults(&cinfo);
  jpeg_set_quality(&cinfo, quality, TRUE);
  jpeg_start_compress(&cinfo, TRUE);
  while (cinfo.next_scanline < cinfo.image_height) {
    JSAMPROW row = const_cast<JSAMPROW>(img.row(static_cast<int>(cinfo.next_scanline)));
    jpeg_write_scanlines(&cinfo, &row, 1);
  }
  jpeg_finish_compress(&cinfo);
  jpeg_destroy_compress(&cinfo);
  std::vector<std::uint8_t> out(buffer, buffer + size);
  std::free(buffer);
  return out;
}

}  // namespace

TEST_CASE("png round trip is pixel exact") {
  std::mt19937 rng(ddp::test::kSeed);
  for (int trial = 0; trial < 10; ++trial) {
    const Raster img = ddp::test::random_raster(rng, 1 + trial * 5, 16);
    CHECK(raster::decode_image(raster::encode_image(img)) == img);
  }
}

TEST_CASE("png encoding is deterministic") {
  std::mt19937 rng(ddp::test::kSeed + 1);
  const Raster img = ddp::test::random_raster(rng, 16, 16);
  CHECK(raster::encode_image(img) == raster::encode_image(img));
}

TEST_CASE("truncated streams are corrupt") {
  std::mt19937 rng(ddp::test::kSeed + 2);
  const auto png = raster::encode_image(ddp::test::random_raster(rng, 32, 32));
  const std::vector<std::uint8_t> cut(png.begin(), png.begin() + png.size() / 2);
  CHECK_THROWS_AS((void)raster::decode_image(cut), CorruptData);

  const auto jpg = jpeg_bytes(ddp::test::gradient(64, 48), 90);
  const std::vector<std::uint8_t> jcut(jpg.begin(), jpg.begin() + jpg.size() / 2);
  CHECK_THROWS_AS((void)raster::decode_image(jcut), CorruptData);
}

TEST_CASE("unknown formats are rejected") {
  const std::vector<std::uint8_t> gif = {'G', 'I', 'F', '8', '9', 'a', 0, 0, 0, 0};
  CHECK_THROWS_AS((void)raster::decode_image(gif), UnsupportedFormat);
  CHECK_THROWS_AS((void)raster::decode_image(std::vector<std::uint8_t>{}), UnsupportedFormat);
  CHECK_THROWS_AS((void)raster::encode_image(Raster(2, 2), raster::ImageFormat::kJpeg),
                  UnsupportedFormat);
}

TEST_CASE("transparent pixels composite over white") {
  const std::vector<std::uint8_t> rgba = {
      10, 20, 30, 0,     // transparent
      10, 20, 30, 255,   // opaque
      0, 0, 0, 128,      // half black
      200, 100, 50, 255};
  const Raster img = raster::decode_image(rgba_png(2, 2, rgba));
  CHECK(img.at(0, 0) == raster::kWhite);
  CHECK(img.at(1, 0) == raster::Rgb{10, 20, 30});
  const auto half = img.at(0, 1);
  CHECK(std::abs(int(half.r) - 127) <= 1);
  CHECK(img.at(1, 1) == raster::Rgb{200, 100, 50});
}

TEST_CASE("jpeg decodes close to the source") {
  const Raster src = ddp::test::gradient(64, 48);
  const Raster img = raster::decode_image(jpeg_bytes(src, 95));
  REQUIRE(img.width() == 64);
  REQUIRE(img.height() == 48);
  double err = 0;
  for (std::size_t i = 0; i < src.bytes().size(); ++i) {
    err += std::abs(int(src.bytes()[i]) - int(img.bytes()[i]));
  }
  CHECK(err / static_cast<double>(src.bytes().size()) < 6.0);
}

TEST_CASE("file helpers") {
  ddp::test::TempDir dir;
  const Raster img = ddp::test::gradient(9, 7);
  raster::write_png_file(img, dir.file("g.png"));
  CHECK(raster::read_image_file(dir.file("g.png")) == img);
  CHECK_THROWS((void)raster::read_image_file(dir.file("missing.png")));
}
