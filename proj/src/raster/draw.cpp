#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "ddp/errors.hpp"
#include "ddp/raster_ops.hpp"

namespace ddp::raster {

Raster crop(const Raster& img, const Rect& region) {
  validate(region, img);
  Raster out(region.w, region.h);
  const auto span = static_cast<std::size_t>(region.w) * 3;
  for (int j = 0; j < region.h; ++j) {
    std::copy_n(img.row(region.y + j) + region.x * 3, span, out.row(j));
  }
  return out;
}

Raster draw_red_box(const Raster& img, const Rect& region, int thickness) {
  validate(region, img);
  if (thickness < 1) throw InvalidArgument("red box thickness must be >= 1");
  Raster out = img;
  const int right = region.x + region.w - 1;
  const int bottom = region.y + region.h - 1;
  for (int y = region.y; y <= bottom; ++y) {
    for (int x = region.x; x <= right; ++x) {
      const bool on_band = x - region.x < thickness || right - x < thickness ||
                           y - region.y < thickness || bottom - y < thickness;
      if (on_band) out.set(x, y, kRed);
    }
  }
  return out;
}

Raster draw_cartesian_auxlines(const Raster& img, std::span<const LineSpec> lines) {
  for (const LineSpec& line : lines) {
    const int extent =
        line.orientation == Orientation::kHorizontal ? img.height() : img.width();
    if (line.position < 0 || line.position >= extent) {
      throw OutOfBounds("aux line position " + std::to_string(line.position) +
                        " outside [0, " + std::to_string(extent) + ")");
    }
    if (line.thickness < 1) throw InvalidArgument("aux line thickness must be >= 1");
  }
  Raster out = img;
  for (const LineSpec& line : lines) {
    if (line.orientation == Orientation::kHorizontal) {
      const int end = std::min(img.height(), line.position + line.thickness);
      for (int y = line.position; y < end; ++y) {
        for (int x = 0; x < img.width(); ++x) out.set(x, y, line.color);
      }
    } else {
      const int end = std::min(img.width(), line.position + line.thickness);
      for (int y = 0; y < img.height(); ++y) {
        for (int x = line.position; x < end; ++x) out.set(x, y, line.color);
      }
    }
  }
  return out;
}

namespace {

double distance_to_segment(double px, double py, double ax, double ay, double bx, double by) {
  const double dx = bx - ax;
  const double dy = by - ay;
  const double len2 = dx * dx + dy * dy;
  double t = 0.0;
  if (len2 > 0.0) t = std::clamp(((px - ax) * dx + (py - ay) * dy) / len2, 0.0, 1.0);
  return std::hypot(px - (ax + t * dx), py - (ay + t * dy));
}

}  // namespace

Raster draw_polar_auxlines(const Raster& img, const PolarSpec& spec) {
  if (!img.contains(spec.cx, spec.cy)) {
    throw OutOfBounds("polar centre (" + std::to_string(spec.cx) + "," +
                      std::to_string(spec.cy) + ") outside image");
  }
  if (spec.radii.empty() && spec.angles_deg.empty()) {
    throw InvalidArgument("polar aux lines need at least one radius or one angle");
  }
  for (double r : spec.radii) {
    if (!(r > 0.0) || !std::isfinite(r)) throw InvalidArgument("polar radii must be > 0");
  }
  for (double a : spec.angles_deg) {
    if (!(a >= 0.0 && a < 360.0)) throw InvalidArgument("polar angles must lie in [0, 360)");
  }
  if (!(spec.spoke_length >= 0.0) || !std::isfinite(spec.spoke_length)) {
    throw InvalidArgument("spoke length must be >= 0");
  }
  if (spec.thickness < 1) throw InvalidArgument("polar thickness must be >= 1");

  // Spoke endpoints; angle 0 points right, 90 points up.
  struct Segment {
    double bx;
    double by;
  };
  std::vector<Segment> spokes;
  for (double a : spec.angles_deg) {
    const double rad = a * std::numbers::pi / 180.0;
    double ux = std::cos(rad);
    double uy = -std::sin(rad);
    // Snap float noise on axis-aligned spokes.
    if (std::abs(ux) < 1e-12) ux = 0.0;
    if (std::abs(uy) < 1e-12) uy = 0.0;
    spokes.push_back({spec.cx + ux * spec.spoke_length, spec.cy + uy * spec.spoke_length});
  }

  const double half = spec.thickness / 2.0 + 1e-9;
  double reach = spec.spoke_length;
  for (double r : spec.radii) reach = std::max(reach, r);
  reach += half + 1.0;
  const int x0 = std::max(0, static_cast<int>(std::floor(spec.cx - reach)));
  const int x1 = std::min(img.width() - 1, static_cast<int>(std::ceil(spec.cx + reach)));
  const int y0 = std::max(0, static_cast<int>(std::floor(spec.cy - reach)));
  const int y1 = std::min(img.height() - 1, static_cast<int>(std::ceil(spec.cy + reach)));

  Raster out = img;
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) {
      const double dx = x - spec.cx;
      const double dy = y - spec.cy;
      bool hit = false;
      const double d = std::hypot(dx, dy);
      for (double r : spec.radii) {
        if (std::abs(d - r) <= half) {
          hit = true;
          break;
        }
      }
      for (std::size_t s = 0; !hit && s < spokes.size(); ++s) {
        hit = distance_to_segment(x, y, spec.cx, spec.cy, spokes[s].bx, spokes[s].by) <= half;
      }
      if (hit) out.set(x, y, spec.color);
    }
  }
  return out;
}

}  // namespace ddp::raster
