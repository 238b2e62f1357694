#pragma once

#include <optional>

#include "hueseg/bordermodel.hpp"

namespace hueseg {

struct SegConfig {
  /// Unset means default_border() of the input image.
  std::optional<Index> border;
  Threshold threshold;
  int tolerance = 0;
  int median_kernel = 3;
  int median_passes = 1;
  Rgb fill{0, 0, 0};

  BorderSpec border_for(Index width, Index height) const {
    return border ? BorderSpec{*border} : default_border(width, height);
  }
};

/// Throws ConfigError naming the offending field.
void validate(const SegConfig& cfg, Index width, Index height);

/// Raw mask: a pixel is background iff it is achromatic and achromatic
/// counts as background, or it is chromatic and its bin matches `bg`.
SegMask classify_pixels(const HueField& field, const BackgroundHueSet& bg);

/// Binary median (majority) filter with edge replication. Each pass reads
/// only the previous pass's output. passes == 0 is the identity.
SegMask median_filter(const SegMask& mask, int kernel, int passes);

/// Foreground pixels from `img`, background pixels set to `fill`.
RgbImage composite(const RgbImage& img, const SegMask& mask, Rgb fill);

struct Segmentation {
  BorderSpec border;
  BackgroundHueSet background;
  SegMask raw;
  SegMask filtered;
  RgbImage composite;
};

Segmentation segment_image(const RgbImage& img, const SegConfig& cfg);

}  // namespace hueseg
