#include "hueseg/evalkit.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "hueseg/bordermodel.hpp"
#include "hueseg/colorspace.hpp"

namespace hueseg {
namespace {

constexpr double kIntensity = 255.0 / 3.0;

// Inverse HSI for S = 1: the sector's trailing channel is zero and the two
// others sum to 255.
Rgb saturated_color(double hue_deg) {
  const int sector = static_cast<int>(hue_deg / 120.0);
  const double h = (hue_deg - 120.0 * sector) * std::numbers::pi / 180.0;
  const double lead = kIntensity * (1.0 + std::cos(h) / std::cos(std::numbers::pi / 3.0 - h));
  const auto a = static_cast<std::uint8_t>(std::clamp(std::lround(lead), 0L, 255L));
  const auto b = static_cast<std::uint8_t>(255 - a);
  switch (sector) {
    case 0: return {a, b, 0};
    case 1: return {0, a, b};
    default: return {b, 0, a};
  }
}

std::array<Rgb, kHueBins> make_bin_colors() {
  std::array<Rgb, kHueBins> table{};
  for (int bin = 0; bin < kHueBins; ++bin) {
    const Rgb c = saturated_color((bin + 0.5) * 360.0 / kHueBins);
    if (hue_bin(rgb_to_hsi(c)) != bin) {
      throw std::logic_error("bin_color: synthesis missed bin " + std::to_string(bin));
    }
    table[static_cast<std::size_t>(bin)] = c;
  }
  return table;
}

bool inside_with_margin(const Shape& shape, Index width, Index height, Index m) {
  if (const auto* r = std::get_if<RectShape>(&shape)) {
    return r->w >= 1 && r->h >= 1 && r->x >= m && r->y >= m && r->x + r->w <= width - m &&
           r->y + r->h <= height - m;
  }
  const auto& d = std::get<DiskShape>(shape);
  return d.r >= 0 && d.cx - d.r >= m && d.cy - d.r >= m && d.cx + d.r <= width - 1 - m &&
         d.cy + d.r <= height - 1 - m;
}

double ratio(std::int64_t num, std::int64_t den) {
  return den == 0 ? 1.0 : static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

void validate(const SynthSpec& spec) {
  if (spec.width < 1 || spec.height < 1) {
    throw ConfigError("size", "image dimensions must be positive");
  }
  if (spec.bg_bin < 0 || spec.bg_bin >= kHueBins) {
    throw ConfigError("bg_bin", "must lie in [0, 255], got " + std::to_string(spec.bg_bin));
  }
  if (spec.fg_bin < 0 || spec.fg_bin >= kHueBins) {
    throw ConfigError("fg_bin", "must lie in [0, 255], got " + std::to_string(spec.fg_bin));
  }
  if (spec.bg_bin == spec.fg_bin) {
    throw ConfigError("fg_bin", "must differ from bg_bin");
  }
  if (!(spec.noise_fraction >= 0.0 && spec.noise_fraction <= 1.0)) {
    throw ConfigError("noise", "must lie in [0, 1], got " + std::to_string(spec.noise_fraction));
  }
  const Index margin = default_border(spec.width, spec.height).thickness;
  if (!inside_with_margin(spec.shape, spec.width, spec.height, margin)) {
    throw ConfigError("shape", "must lie inside the image with a margin of at least " +
                                   std::to_string(margin) + " px");
  }
}

Rgb bin_color(int bin) {
  static const std::array<Rgb, kHueBins> table = make_bin_colors();
  return table.at(static_cast<std::size_t>(bin));
}

SegMask shape_mask(const Shape& shape, Index width, Index height) {
  SegMask mask = SegMask::Zero(height, width);
  if (const auto* r = std::get_if<RectShape>(&shape)) {
    mask.block(r->y, r->x, r->h, r->w).setConstant(true);
    return mask;
  }
  const auto& d = std::get<DiskShape>(shape);
  for (Index y = 0; y < height; ++y) {
    for (Index x = 0; x < width; ++x) {
      const Index dx = x - d.cx;
      const Index dy = y - d.cy;
      mask(y, x) = dx * dx + dy * dy <= d.r * d.r;
    }
  }
  return mask;
}

SynthScene synth_scene(const SynthSpec& spec) {
  validate(spec);
  SynthScene scene{RgbImage(spec.width, spec.height, bin_color(spec.bg_bin)),
                   shape_mask(spec.shape, spec.width, spec.height)};

  std::vector<Index> background;
  const Rgb fg = bin_color(spec.fg_bin);
  for (Index y = 0; y < spec.height; ++y) {
    for (Index x = 0; x < spec.width; ++x) {
      if (scene.truth(y, x)) {
        scene.image.set(x, y, fg);
      } else {
        background.push_back(y * spec.width + x);
      }
    }
  }

  const auto flips = static_cast<std::size_t>(
      std::floor(spec.noise_fraction * static_cast<double>(background.size())));
  SplitMix64 rng(spec.seed);
  for (std::size_t i = 0; i < flips; ++i) {
    const auto j = i + rng.below(background.size() - i);
    std::swap(background[i], background[j]);
    auto bin = static_cast<int>(rng.below(kHueBins - 1));
    if (bin >= spec.bg_bin) ++bin;
    const Index idx = background[i];
    scene.image.set(idx % spec.width, idx / spec.width, bin_color(bin));
  }
  return scene;
}

MaskMetrics score(const SegMask& pred, const SegMask& truth) {
  require_same_shape(pred, truth, "score");
  MaskMetrics m;
  m.tp = (pred && truth).count();
  m.fp = (pred && !truth).count();
  m.fn = (!pred && truth).count();
  m.tn = pred.size() - m.tp - m.fp - m.fn;
  m.iou = ratio(m.tp, m.tp + m.fp + m.fn);
  m.precision = ratio(m.tp, m.tp + m.fp);
  m.recall = ratio(m.tp, m.tp + m.fn);
  m.f1 = ratio(2 * m.tp, 2 * m.tp + m.fp + m.fn);
  m.pixel_accuracy = ratio(m.tp + m.tn, pred.size());
  return m;
}

}  // namespace hueseg
