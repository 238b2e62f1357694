#include "hueseg/segment.hpp"

#include <string>

namespace hueseg {
namespace {

void validate_median(int kernel, int passes) {
  if (kernel < 1 || kernel % 2 == 0) {
    throw ConfigError("median_kernel", "must be odd and at least 1, got " + std::to_string(kernel));
  }
  if (passes < 0) {
    throw ConfigError("median_passes", "must be non-negative, got " + std::to_string(passes));
  }
}

// One majority pass via a summed-area table over the edge-replicated mask.
SegMask majority_pass(const SegMask& mask, int kernel) {
  const Index rows = mask.rows();
  const Index cols = mask.cols();
  const Index pad = kernel / 2;

  Plane<std::int32_t> sat = Plane<std::int32_t>::Zero(rows + 2 * pad + 1, cols + 2 * pad + 1);
  for (Index i = 0; i < rows + 2 * pad; ++i) {
    const Index src_row = std::clamp<Index>(i - pad, 0, rows - 1);
    std::int32_t row_sum = 0;
    for (Index j = 0; j < cols + 2 * pad; ++j) {
      const Index src_col = std::clamp<Index>(j - pad, 0, cols - 1);
      row_sum += mask(src_row, src_col) ? 1 : 0;
      sat(i + 1, j + 1) = sat(i, j + 1) + row_sum;
    }
  }

  const std::int32_t window = kernel * kernel;
  SegMask out(rows, cols);
  for (Index y = 0; y < rows; ++y) {
    for (Index x = 0; x < cols; ++x) {
      const std::int32_t count = sat(y + kernel, x + kernel) - sat(y, x + kernel) -
                                 sat(y + kernel, x) + sat(y, x);
      out(y, x) = 2 * count > window;
    }
  }
  return out;
}

}  // namespace

void validate(const SegConfig& cfg, Index width, Index height) {
  validate_border(cfg.border_for(width, height), width, height);
  validate_threshold(cfg.threshold);
  if (cfg.tolerance < 0) {
    throw ConfigError("tolerance", "must be non-negative, got " + std::to_string(cfg.tolerance));
  }
  validate_median(cfg.median_kernel, cfg.median_passes);
}

SegMask classify_pixels(const HueField& field, const BackgroundHueSet& bg) {
  require_same_shape(field.bins, field.achromatic, "classify_pixels");
  SegMask mask(field.height(), field.width());
  for (Index i = 0; i < mask.size(); ++i) {
    const bool background = field.achromatic(i) ? bg.achromatic_is_background()
                                                : bg.matches(field.bins(i));
    mask(i) = !background;
  }
  return mask;
}

SegMask median_filter(const SegMask& mask, int kernel, int passes) {
  validate_median(kernel, passes);
  SegMask current = mask;
  if (kernel == 1) return current;
  for (int p = 0; p < passes; ++p) current = majority_pass(current, kernel);
  return current;
}

RgbImage composite(const RgbImage& img, const SegMask& mask, Rgb fill) {
  if (mask.rows() != img.height() || mask.cols() != img.width()) {
    throw DimensionError("composite: mask " + std::to_string(mask.cols()) + "x" +
                         std::to_string(mask.rows()) + " does not match image " +
                         std::to_string(img.width()) + "x" + std::to_string(img.height()));
  }
  RgbImage out = img;
  for (Index y = 0; y < img.height(); ++y) {
    for (Index x = 0; x < img.width(); ++x) {
      if (!mask(y, x)) out.set(x, y, fill);
    }
  }
  return out;
}

Segmentation segment_image(const RgbImage& img, const SegConfig& cfg) {
  validate(cfg, img.width(), img.height());
  const BorderSpec border = cfg.border_for(img.width(), img.height());
  const HueField field = to_hue_field(img);
  BackgroundHueSet bg = build_background_set(field, border, cfg.threshold, cfg.tolerance);
  SegMask raw = classify_pixels(field, bg);
  SegMask filtered = median_filter(raw, cfg.median_kernel, cfg.median_passes);
  RgbImage out = composite(img, filtered, cfg.fill);
  return {border, std::move(bg), std::move(raw), std::move(filtered), std::move(out)};
}

}  // namespace hueseg
