#include <algorithm>
#include <optional>
#include <vector>

#include "ddp/errors.hpp"
#include "ddp/raster_ops.hpp"
#include "detail.hpp"

namespace ddp::raster::reference {

Raster gaussian_smooth(const Raster& img, double sigma) {
  const std::vector<double> k = gaussian_kernel(sigma);
  if (k.empty()) return img;
  const int radius = static_cast<int>(k.size() / 2);
  const int w = img.width();
  const int h = img.height();

  std::vector<double> tmp(img.pixel_count() * 3);
  for (int y = 0; y < h; ++y) {
    const std::uint8_t* src = img.row(y);
    for (int x = 0; x < w; ++x) {
      for (int c = 0; c < 3; ++c) {
        double acc = 0.0;
        for (int t = -radius; t <= radius; ++t) {
          const int sx = detail::clamp_index(x + t, w);
          acc += k[static_cast<std::size_t>(t + radius)] * src[sx * 3 + c];
        }
        tmp[(static_cast<std::size_t>(y) * w + x) * 3 + c] = acc;
      }
    }
  }

  Raster out(w, h);
  for (int y = 0; y < h; ++y) {
    std::uint8_t* dst = out.row(y);
    for (int x = 0; x < w; ++x) {
      for (int c = 0; c < 3; ++c) {
        double acc = 0.0;
        for (int t = -radius; t <= radius; ++t) {
          const int sy = detail::clamp_index(y + t, h);
          acc += k[static_cast<std::size_t>(t + radius)] *
                 tmp[(static_cast<std::size_t>(sy) * w + x) * 3 + c];
        }
        dst[x * 3 + c] = detail::quantize(acc);
      }
    }
  }
  return out;
}

Raster downsample_max_dim(const Raster& img, int max_dim) {
  const Size size = fit_max_dim(img.width(), img.height(), max_dim);
  if (size.width == img.width() && size.height == img.height()) return img;
  const auto xtaps = detail::area_taps(img.width(), size.width);
  const auto ytaps = detail::area_taps(img.height(), size.height);

  std::vector<double> tmp(static_cast<std::size_t>(img.height()) * size.width * 3);
  for (int y = 0; y < img.height(); ++y) {
    const std::uint8_t* src = img.row(y);
    for (int ox = 0; ox < size.width; ++ox) {
      const detail::Tap& tap = xtaps[static_cast<std::size_t>(ox)];
      for (int c = 0; c < 3; ++c) {
        double acc = 0.0;
        for (std::size_t i = 0; i < tap.weights.size(); ++i) {
          acc += tap.weights[i] * src[(tap.first + static_cast<int>(i)) * 3 + c];
        }
        tmp[(static_cast<std::size_t>(y) * size.width + ox) * 3 + c] = acc;
      }
    }
  }

  Raster out(size.width, size.height);
  for (int oy = 0; oy < size.height; ++oy) {
    const detail::Tap& tap = ytaps[static_cast<std::size_t>(oy)];
    std::uint8_t* dst = out.row(oy);
    for (int ox = 0; ox < size.width; ++ox) {
      for (int c = 0; c < 3; ++c) {
        double acc = 0.0;
        for (std::size_t i = 0; i < tap.weights.size(); ++i) {
          const std::size_t sy = static_cast<std::size_t>(tap.first) + i;
          acc += tap.weights[i] * tmp[(sy * size.width + ox) * 3 + c];
        }
        dst[ox * 3 + c] = detail::quantize(acc);
      }
    }
  }
  return out;
}

Raster apply_white_mask(const Raster& img, const BinaryMask& mask) {
  if (mask.width() != img.width() || mask.height() != img.height()) {
    throw DimensionMismatch("mask and image dimensions differ");
  }
  Raster out = img;
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      if (!mask.at(x, y)) out.set(x, y, kWhite);
    }
  }
  return out;
}

Raster apply_blur_mask(const Raster& img, const std::optional<Rect>& keep, double sigma) {
  if (!(sigma > 0.0)) throw InvalidArgument("blur sigma must be > 0");
  if (keep) validate(*keep, img);
  Raster out = reference::gaussian_smooth(img, sigma);
  if (keep) {
    for (int y = keep->y; y < keep->y + keep->h; ++y) {
      for (int x = keep->x; x < keep->x + keep->w; ++x) out.set(x, y, img.at(x, y));
    }
  }
  return out;
}

Raster enhance_contrast(const Raster& img, double p_low, double p_high) {
  if (!(p_low >= 0.0 && p_low < p_high && p_high <= 100.0)) {
    throw InvalidArgument("contrast percentiles must satisfy 0 <= p_low < p_high <= 100");
  }
  std::array<detail::Histogram, 3> hist{};
  const auto bytes = img.bytes();
  for (std::size_t i = 0; i < bytes.size(); ++i) ++hist[i % 3][bytes[i]];

  std::array<std::array<std::uint8_t, 256>, 3> lut{};
  for (int c = 0; c < 3; ++c) {
    const int lo = detail::percentile_value(hist[c], img.pixel_count(), p_low);
    const int hi = detail::percentile_value(hist[c], img.pixel_count(), p_high);
    lut[c] = detail::stretch_lut(lo, hi);
  }
  Raster out = img;
  auto dst = out.bytes();
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = lut[i % 3][dst[i]];
  return out;
}

}  // namespace ddp::raster::reference
