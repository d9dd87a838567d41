#include <omp.h>

#include <algorithm>
#include <optional>
#include <vector>

#include "ddp/errors.hpp"
#include "ddp/raster_ops.hpp"
#include "detail.hpp"

namespace ddp::raster {

namespace {

// Row passes. Per-sample accumulation order matches reference.cpp exactly.

void convolve_row_h(const std::uint8_t* src, double* dst, int w, const std::vector<double>& k) {
  const int radius = static_cast<int>(k.size() / 2);
  for (int x = 0; x < w; ++x) {
    for (int c = 0; c < 3; ++c) {
      double acc = 0.0;
      for (int t = -radius; t <= radius; ++t) {
        acc += k[static_cast<std::size_t>(t + radius)] *
               src[detail::clamp_index(x + t, w) * 3 + c];
      }
      dst[x * 3 + c] = acc;
    }
  }
}

void convolve_row_v(const std::vector<double>& tmp, std::uint8_t* dst, int y, int w, int h,
                    const std::vector<double>& k) {
  const int radius = static_cast<int>(k.size() / 2);
  for (int x = 0; x < w; ++x) {
    for (int c = 0; c < 3; ++c) {
      double acc = 0.0;
      for (int t = -radius; t <= radius; ++t) {
        const auto sy = static_cast<std::size_t>(detail::clamp_index(y + t, h));
        acc += k[static_cast<std::size_t>(t + radius)] *
               tmp[(sy * static_cast<std::size_t>(w) + x) * 3 + c];
      }
      dst[x * 3 + c] = detail::quantize(acc);
    }
  }
}

}  // namespace

Raster gaussian_smooth(const Raster& img, double sigma) {
  const std::vector<double> k = gaussian_kernel(sigma);
  if (k.empty()) return img;
  const int w = img.width();
  const int h = img.height();

  std::vector<double> tmp(img.pixel_count() * 3);
#pragma omp parallel for schedule(static)
  for (int y = 0; y < h; ++y) {
    convolve_row_h(img.row(y), &tmp[static_cast<std::size_t>(y) * w * 3], w, k);
  }

  Raster out(w, h);
#pragma omp parallel for schedule(static)
  for (int y = 0; y < h; ++y) convolve_row_v(tmp, out.row(y), y, w, h, k);
  return out;
}

Raster downsample_max_dim(const Raster& img, int max_dim) {
  const Size size = fit_max_dim(img.width(), img.height(), max_dim);
  if (size.width == img.width() && size.height == img.height()) return img;
  const auto xtaps = detail::area_taps(img.width(), size.width);
  const auto ytaps = detail::area_taps(img.height(), size.height);
  const int ow = size.width;

  std::vector<double> tmp(static_cast<std::size_t>(img.height()) * ow * 3);
#pragma omp parallel for schedule(static)
  for (int y = 0; y < img.height(); ++y) {
    const std::uint8_t* src = img.row(y);
    double* dst = &tmp[static_cast<std::size_t>(y) * ow * 3];
    for (int ox = 0; ox < ow; ++ox) {
      const detail::Tap& tap = xtaps[static_cast<std::size_t>(ox)];
      for (int c = 0; c < 3; ++c) {
        double acc = 0.0;
        for (std::size_t i = 0; i < tap.weights.size(); ++i) {
          acc += tap.weights[i] * src[(tap.first + static_cast<int>(i)) * 3 + c];
        }
        dst[ox * 3 + c] = acc;
      }
    }
  }

  Raster out(ow, size.height);
#pragma omp parallel for schedule(static)
  for (int oy = 0; oy < size.height; ++oy) {
    const detail::Tap& tap = ytaps[static_cast<std::size_t>(oy)];
    std::uint8_t* dst = out.row(oy);
    for (int ox = 0; ox < ow; ++ox) {
      for (int c = 0; c < 3; ++c) {
        double acc = 0.0;
        for (std::size_t i = 0; i < tap.weights.size(); ++i) {
          const std::size_t sy = static_cast<std::size_t>(tap.first) + i;
          acc += tap.weights[i] * tmp[(sy * ow + ox) * 3 + c];
        }
        dst[ox * 3 + c] = detail::quantize(acc);
      }
    }
  }
  return out;
}

Raster apply_white_mask(const Raster& img, const BinaryMask& mask) {
  if (mask.width() != img.width() || mask.height() != img.height()) {
    throw DimensionMismatch("mask is " + std::to_string(mask.width()) + "x" +
                            std::to_string(mask.height()) + ", image is " +
                            std::to_string(img.width()) + "x" + std::to_string(img.height()));
  }
  Raster out = img;
#pragma omp parallel for schedule(static)
  for (int y = 0; y < img.height(); ++y) {
    std::uint8_t* row = out.row(y);
    for (int x = 0; x < img.width(); ++x) {
      if (!mask.at(x, y)) {
        row[x * 3] = 255;
        row[x * 3 + 1] = 255;
        row[x * 3 + 2] = 255;
      }
    }
  }
  return out;
}

Raster apply_blur_mask(const Raster& img, const std::optional<Rect>& keep, double sigma) {
  if (!(sigma > 0.0)) throw InvalidArgument("blur sigma must be > 0");
  if (keep) validate(*keep, img);
  Raster out = gaussian_smooth(img, sigma);
  if (keep) {
    const auto span = static_cast<std::size_t>(keep->w) * 3;
#pragma omp parallel for schedule(static)
    for (int y = keep->y; y < keep->y + keep->h; ++y) {
      std::copy_n(img.row(y) + keep->x * 3, span, out.row(y) + keep->x * 3);
    }
  }
  return out;
}

Raster enhance_contrast(const Raster& img, double p_low, double p_high) {
  if (!(p_low >= 0.0 && p_low < p_high && p_high <= 100.0)) {
    throw InvalidArgument("contrast percentiles must satisfy 0 <= p_low < p_high <= 100");
  }
  const auto bytes = img.bytes();
  const auto n = static_cast<long long>(img.pixel_count());
  std::uint64_t counts[768] = {};
#pragma omp parallel for schedule(static) reduction(+ : counts[:768])
  for (long long p = 0; p < n; ++p) {
    for (int c = 0; c < 3; ++c) ++counts[c * 256 + bytes[static_cast<std::size_t>(p) * 3 + c]];
  }

  std::array<std::array<std::uint8_t, 256>, 3> lut{};
  for (int c = 0; c < 3; ++c) {
    detail::Histogram hist{};
    std::copy_n(&counts[c * 256], 256, hist.begin());
    const int lo = detail::percentile_value(hist, img.pixel_count(), p_low);
    const int hi = detail::percentile_value(hist, img.pixel_count(), p_high);
    lut[c] = detail::stretch_lut(lo, hi);
  }

  Raster out = img;
  auto dst = out.bytes();
#pragma omp parallel for schedule(static)
  for (long long p = 0; p < n; ++p) {
    for (int c = 0; c < 3; ++c) {
      auto& v = dst[static_cast<std::size_t>(p) * 3 + c];
      v = lut[c][v];
    }
  }
  return out;
}

}  // namespace ddp::raster
