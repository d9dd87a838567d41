#pragma once

// Arithmetic shared by the parallel kernels and the serial reference. Both
// paths call these per output sample in the same order, which is what makes
// them byte-identical.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

namespace ddp::raster::detail {

inline std::uint8_t quantize(double v) noexcept {
  if (v <= 0.0) return 0;
  if (v >= 255.0) return 255;
  return static_cast<std::uint8_t>(v + 0.5);
}

inline int clamp_index(int i, int n) noexcept { return std::clamp(i, 0, n - 1); }

/// One output sample's footprint on the source axis for area resampling.
struct Tap {
  int first;                    // first source index
  std::vector<double> weights;  // one per source index starting at `first`
};

/// Box-filter footprints mapping `in` samples to `out` samples. Coverage is
/// computed in integer units of 1/(in*out) so weights are exact rationals.
inline std::vector<Tap> area_taps(int in, int out) {
  std::vector<Tap> taps(static_cast<std::size_t>(out));
  const long long lin = in;
  const long long lout = out;
  for (long long o = 0; o < lout; ++o) {
    const long long a = o * lin;        // footprint start, units of 1/out
    const long long b = (o + 1) * lin;  // footprint end
    const long long first = a / lout;
    const long long last = (b + lout - 1) / lout;  // exclusive
    Tap& t = taps[static_cast<std::size_t>(o)];
    t.first = static_cast<int>(first);
    for (long long i = first; i < last; ++i) {
      const long long lo = std::max(a, i * lout);
      const long long hi = std::min(b, (i + 1) * lout);
      t.weights.push_back(static_cast<double>(hi - lo) / static_cast<double>(lin));
    }
  }
  return taps;
}

using Histogram = std::array<std::uint64_t, 256>;

/// Nearest-rank percentile on a histogram holding `n` samples.
inline int percentile_value(const Histogram& hist, std::uint64_t n, double p) {
  auto rank = static_cast<std::uint64_t>(std::ceil(p / 100.0 * static_cast<double>(n)));
  rank = std::clamp<std::uint64_t>(rank, 1, n);
  std::uint64_t cumulative = 0;
  for (int v = 0; v < 256; ++v) {
    cumulative += hist[static_cast<std::size_t>(v)];
    if (cumulative >= rank) return v;
  }
  return 255;
}

/// Lookup table for the linear stretch [lo, hi] -> [0, 255], rounding half up.
inline std::array<std::uint8_t, 256> stretch_lut(int lo, int hi) {
  std::array<std::uint8_t, 256> lut{};
  for (int v = 0; v < 256; ++v) {
    if (hi == lo) {
      lut[static_cast<std::size_t>(v)] = static_cast<std::uint8_t>(v);
    } else if (v <= lo) {
      lut[static_cast<std::size_t>(v)] = 0;
    } else if (v >= hi) {
      lut[static_cast<std::size_t>(v)] = 255;
    } else {
      const int span = hi - lo;
      lut[static_cast<std::size_t>(v)] =
          static_cast<std::uint8_t>((2 * 255 * (v - lo) + span) / (2 * span));
    }
  }
  return lut;
}

}  // namespace ddp::raster::detail
