#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ddp/raster.hpp"

namespace ddp::raster {

inline constexpr double kDefaultSigma1 = 1.0;
inline constexpr double kDefaultHeavySigma = 6.0;
inline constexpr double kDefaultContrastLow = 2.0;
inline constexpr double kDefaultContrastHigh = 98.0;

/// Normalized 1-D Gaussian taps, radius ceil(3 sigma). Empty for sigma == 0.
[[nodiscard]] std::vector<double> gaussian_kernel(double sigma);

/// Output size of downsample_max_dim without doing the resampling.
struct Size {
  int width;
  int height;
  friend bool operator==(const Size&, const Size&) = default;
};
[[nodiscard]] Size fit_max_dim(int width, int height, int max_dim);

// Parallel (OpenMP) kernels. Each one is byte-identical to its counterpart in
// ddp::raster::reference; tests/unit/raster_parallel_test.cpp holds them to it.

/// Separable Gaussian convolution, clamp-to-edge. sigma == 0 is the identity.
[[nodiscard]] Raster gaussian_smooth(const Raster& img, double sigma);

/// Area-average shrink so that max(w, h) <= max_dim. Never upscales.
[[nodiscard]] Raster downsample_max_dim(const Raster& img, int max_dim);

/// I * M + (1 - M) * white.
[[nodiscard]] Raster apply_white_mask(const Raster& img, const BinaryMask& mask);

/// Blurs everything outside `keep` (everything if nullopt) with gaussian_smooth(sigma).
[[nodiscard]] Raster apply_blur_mask(const Raster& img, const std::optional<Rect>& keep,
                                     double sigma);

/// Per-channel percentile stretch; channels with hi == lo pass through.
[[nodiscard]] Raster enhance_contrast(const Raster& img, double p_low = kDefaultContrastLow,
                                      double p_high = kDefaultContrastHigh);

[[nodiscard]] Raster crop(const Raster& img, const Rect& region);
[[nodiscard]] Raster draw_red_box(const Raster& img, const Rect& region, int thickness);
[[nodiscard]] Raster draw_cartesian_auxlines(const Raster& img, std::span<const LineSpec> lines);
[[nodiscard]] Raster draw_polar_auxlines(const Raster& img, const PolarSpec& spec);

namespace reference {

// Single-threaded versions of the parallel kernels above.
[[nodiscard]] Raster gaussian_smooth(const Raster& img, double sigma);
[[nodiscard]] Raster downsample_max_dim(const Raster& img, int max_dim);
[[nodiscard]] Raster apply_white_mask(const Raster& img, const BinaryMask& mask);
[[nodiscard]] Raster apply_blur_mask(const Raster& img, const std::optional<Rect>& keep,
                                     double sigma);
[[nodiscard]] Raster enhance_contrast(const Raster& img, double p_low, double p_high);

}  // namespace reference

enum class ImageFormat { kPng, kJpeg };

/// PNG or JPEG bytes to RGB; alpha is composited over white.
[[nodiscard]] Raster decode_image(std::span<const std::uint8_t> bytes);
/// Only PNG is supported for encoding.
[[nodiscard]] std::vector<std::uint8_t> encode_image(const Raster& img,
                                                     ImageFormat format = ImageFormat::kPng);

[[nodiscard]] Raster read_image_file(const std::string& path);
void write_png_file(const Raster& img, const std::string& path);

}  // namespace ddp::raster
