#include "ddp/raster.hpp"

#include <string>

#include "ddp/errors.hpp"

namespace ddp::raster {

Raster::Raster(int width, int height, Rgb fill) : width_(width), height_(height) {
  if (width < 1 || height < 1) {
    throw InvalidArgument("raster dimensions must be >= 1, got " + std::to_string(width) + "x" +
                          std::to_string(height));
  }
  data_.resize(pixel_count() * 3);
  for (std::size_t i = 0; i < data_.size(); i += 3) {
    data_[i] = fill.r;
    data_[i + 1] = fill.g;
    data_[i + 2] = fill.b;
  }
}

Raster::Raster(int width, int height, std::vector<std::uint8_t> pixels)
    : width_(width), height_(height), data_(std::move(pixels)) {
  if (width < 1 || height < 1) {
    throw InvalidArgument("raster dimensions must be >= 1");
  }
  if (data_.size() != pixel_count() * 3) {
    throw DimensionMismatch("pixel buffer holds " + std::to_string(data_.size()) +
                            " bytes, expected " + std::to_string(pixel_count() * 3));
  }
}

void validate(const Rect& r, const Raster& img) {
  if (r.w < 1 || r.h < 1 || r.x < 0 || r.y < 0 ||
      static_cast<long long>(r.x) + r.w > img.width() ||
      static_cast<long long>(r.y) + r.h > img.height()) {
    throw OutOfBounds("rect [" + std::to_string(r.x) + "," + std::to_string(r.y) + "," +
                      std::to_string(r.w) + "," + std::to_string(r.h) + "] exceeds " +
                      std::to_string(img.width()) + "x" + std::to_string(img.height()) +
                      " image");
  }
}

BinaryMask::BinaryMask(int width, int height, bool fill) : width_(width), height_(height) {
  if (width < 1 || height < 1) {
    throw InvalidArgument("mask dimensions must be >= 1");
  }
  bits_.assign(static_cast<std::size_t>(width) * height, fill ? 1 : 0);
}

BinaryMask BinaryMask::from_rect(int width, int height, const Rect& keep) {
  BinaryMask m(width, height, false);
  if (keep.w < 1 || keep.h < 1 || keep.x < 0 || keep.y < 0 || keep.x + keep.w > width ||
      keep.y + keep.h > height) {
    throw OutOfBounds("mask rect exceeds mask extent");
  }
  for (int y = keep.y; y < keep.y + keep.h; ++y) {
    for (int x = keep.x; x < keep.x + keep.w; ++x) m.set(x, y, true);
  }
  return m;
}

}  // namespace ddp::raster

#include <cmath>

#include "ddp/raster_ops.hpp"

namespace ddp::raster {

std::vector<double> gaussian_kernel(double sigma) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
    throw InvalidArgument("gaussian sigma must be finite and >= 0");
  }
  if (sigma == 0.0) return {};
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> taps(static_cast<std::size_t>(2 * radius + 1));
  double sum = 0.0;
  for (int k = -radius; k <= radius; ++k) {
    const double w = std::exp(-(static_cast<double>(k) * k) / (2.0 * sigma * sigma));
    taps[static_cast<std::size_t>(k + radius)] = w;
    sum += w;
  }
  for (double& w : taps) w /= sum;
  return taps;
}

Size fit_max_dim(int width, int height, int max_dim) {
  if (max_dim < 1) throw InvalidArgument("max_dim must be >= 1");
  const int longest = std::max(width, height);
  if (longest <= max_dim) return {width, height};
  // round(axis * max_dim / longest), half away from zero, in exact integers.
  auto scale = [&](int axis) {
    const long long num = 2LL * axis * max_dim + longest;
    return std::max(1, static_cast<int>(num / (2LL * longest)));
  };
  return {scale(width), scale(height)};
}

}  // namespace ddp::raster
