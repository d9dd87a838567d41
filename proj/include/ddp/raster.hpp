#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace ddp::raster {

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;
  friend bool operator==(const Rgb&, const Rgb&) = default;
};

inline constexpr Rgb kWhite{255, 255, 255};
inline constexpr Rgb kRed{255, 0, 0};
inline constexpr Rgb kGreen{0, 255, 0};

/// 8-bit RGB image, row-major, three interleaved channels per pixel.
class Raster {
 public:
  Raster(int width, int height, Rgb fill = {});
  Raster(int width, int height, std::vector<std::uint8_t> pixels);

  [[nodiscard]] int width() const noexcept { return width_; }
  [[nodiscard]] int height() const noexcept { return height_; }
  [[nodiscard]] std::size_t pixel_count() const noexcept {
    return static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_);
  }

  [[nodiscard]] Rgb at(int x, int y) const noexcept {
    const std::uint8_t* p = &data_[index(x, y)];
    return {p[0], p[1], p[2]};
  }
  void set(int x, int y, Rgb c) noexcept {
    std::uint8_t* p = &data_[index(x, y)];
    p[0] = c.r;
    p[1] = c.g;
    p[2] = c.b;
  }
  [[nodiscard]] bool contains(int x, int y) const noexcept {
    return x >= 0 && y >= 0 && x < width_ && y < height_;
  }

  [[nodiscard]] std::span<const std::uint8_t> bytes() const noexcept { return data_; }
  [[nodiscard]] std::span<std::uint8_t> bytes() noexcept { return data_; }
  [[nodiscard]] std::uint8_t* row(int y) noexcept { return &data_[index(0, y)]; }
  [[nodiscard]] const std::uint8_t* row(int y) const noexcept { return &data_[index(0, y)]; }

  friend bool operator==(const Raster&, const Raster&) = default;

 private:
  [[nodiscard]] std::size_t index(int x, int y) const noexcept {
    return (static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
            static_cast<std::size_t>(x)) * 3;
  }

  int width_;
  int height_;
  std::vector<std::uint8_t> data_;
};

struct Rect {
  int x = 0;
  int y = 0;
  int w = 1;
  int h = 1;
  friend bool operator==(const Rect&, const Rect&) = default;
};

/// Throws OutOfBounds unless `r` has positive extent and lies inside `img`.
void validate(const Rect& r, const Raster& img);

class BinaryMask {
 public:
  BinaryMask(int width, int height, bool fill = false);

  /// Ones inside `keep`, zeros elsewhere.
  static BinaryMask from_rect(int width, int height, const Rect& keep);

  [[nodiscard]] int width() const noexcept { return width_; }
  [[nodiscard]] int height() const noexcept { return height_; }
  [[nodiscard]] bool at(int x, int y) const noexcept {
    return bits_[static_cast<std::size_t>(y) * width_ + x] != 0;
  }
  void set(int x, int y, bool v) noexcept {
    bits_[static_cast<std::size_t>(y) * width_ + x] = v ? 1 : 0;
  }

 private:
  int width_;
  int height_;
  std::vector<std::uint8_t> bits_;
};

enum class Orientation { kHorizontal, kVertical };

struct LineSpec {
  Orientation orientation = Orientation::kHorizontal;
  int position = 0;
  int thickness = 2;
  Rgb color = kGreen;
};

struct PolarSpec {
  int cx = 0;
  int cy = 0;
  std::vector<double> radii;
  std::vector<double> angles_deg;
  double spoke_length = 0.0;
  int thickness = 2;
  Rgb color = kGreen;
};

}  // namespace ddp::raster
