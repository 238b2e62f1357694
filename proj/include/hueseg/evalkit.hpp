#pragma once

#include <cstdint>
#include <variant>

#include "hueseg/image.hpp"

namespace hueseg {

/// SplitMix64 (Steele, Lea, Flood 2014). The sequence is fully specified by
/// the seed, so generated scenes are identical on every platform:
///
///   state += 0x9E3779B97F4A7C15
///   z = (state ^ (state >> 30)) * 0xBF58476D1CE4E5B9
///   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
///   return z ^ (z >> 31)
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform integer in [0, bound), bound >= 1. Rejection sampling on the
  /// low end keeps it unbiased.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t floor = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t r = next();
      if (r >= floor) return r % bound;
    }
  }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

struct RectShape {
  Index x = 0, y = 0, w = 0, h = 0;
};

/// Pixels with (x-cx)^2 + (y-cy)^2 <= r^2.
struct DiskShape {
  Index cx = 0, cy = 0, r = 0;
};

using Shape = std::variant<RectShape, DiskShape>;

struct SynthSpec {
  Index width = 64;
  Index height = 64;
  int bg_bin = 85;
  int fg_bin = 0;
  Shape shape = RectShape{22, 22, 20, 20};
  double noise_fraction = 0.0;
  std::uint64_t seed = 0;
};

/// Throws ConfigError when the bins are out of range or equal, the noise
/// fraction is outside [0, 1], or the shape does not keep a margin of at
/// least default_border() pixels from every image edge.
void validate(const SynthSpec& spec);

/// Fully saturated colour (S = 1, I = 85) whose hue lies at the centre of
/// `bin`, rounded to 8 bits. rgb_to_hsi of the result always lands in `bin`.
Rgb bin_color(int bin);

SegMask shape_mask(const Shape& shape, Index width, Index height);

struct SynthScene {
  RgbImage image;
  SegMask truth;
};

/// Background in bg_bin, shape in fg_bin, then floor(noise_fraction *
/// background pixels) distinct background pixels recoloured to random bins
/// other than bg_bin. The ground truth is the shape mask.
SynthScene synth_scene(const SynthSpec& spec);

struct MaskMetrics {
  std::int64_t tp = 0, fp = 0, fn = 0, tn = 0;
  double iou = 1.0;
  double precision = 1.0;
  double recall = 1.0;
  double f1 = 1.0;
  double pixel_accuracy = 1.0;
};

/// Ratios with a zero denominator are 1.
MaskMetrics score(const SegMask& pred, const SegMask& truth);

}  // namespace hueseg
