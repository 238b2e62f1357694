#include "hueseg/bordermodel.hpp"

#include <cmath>
#include <string>

namespace hueseg {
namespace {

Strip block_of(const HueField& field, Index row, Index col, Index rows, Index cols) {
  return {field.bins.block(row, col, rows, cols), field.achromatic.block(row, col, rows, cols)};
}

}  // namespace

BorderSpec default_border(Index width, Index height) {
  const auto side = static_cast<double>(std::min(width, height));
  return {std::max<Index>(1, static_cast<Index>(std::lround(0.02 * side)))};
}

void validate_border(const BorderSpec& spec, Index width, Index height) {
  if (spec.thickness < 1) {
    throw ConfigError("border", "thickness must be at least 1, got " +
                                    std::to_string(spec.thickness));
  }
  if (2 * spec.thickness >= std::min(width, height)) {
    throw ConfigError("border", "strip too thick: 2*" + std::to_string(spec.thickness) +
                                    " must be less than min(" + std::to_string(width) + ", " +
                                    std::to_string(height) + ")");
  }
}

BorderStrips extract_borders(const HueField& field, const BorderSpec& spec) {
  const Index w = field.width();
  const Index h = field.height();
  const Index t = spec.thickness;
  validate_border(spec, w, h);
  return {
      block_of(field, 0, 0, t, w),
      block_of(field, h - t, 0, t, w),
      block_of(field, t, 0, h - 2 * t, t),
      block_of(field, t, w - t, h - 2 * t, t),
  };
}

HueHistogram histogram(const Strip& strip) {
  HueHistogram hist;
  const auto* bins = strip.bins.data();
  const auto* achromatic = strip.achromatic.data();
  for (Index i = 0; i < strip.size(); ++i) {
    if (achromatic[i]) {
      ++hist.achromatic_count;
    } else {
      ++hist.counts(bins[i]);
    }
  }
  hist.total = strip.size();
  return hist;
}

BinSet threshold_bins(const HueHistogram& hist, std::int64_t threshold) {
  validate_threshold({threshold, std::nullopt});
  BinSet out;
  for (int b = 0; b < kHueBins; ++b) out[b] = hist.counts(b) > threshold;
  return out;
}

BinSet threshold_bins_relative(const HueHistogram& hist, double fraction) {
  const Threshold rule{kDefaultThreshold, fraction};
  validate_threshold(rule);
  BinSet out;
  for (int b = 0; b < kHueBins; ++b) out[b] = rule.exceeded(hist.counts(b), hist.total);
  return out;
}

void validate_threshold(const Threshold& threshold) {
  if (threshold.fraction) {
    if (!(*threshold.fraction >= 0.0 && *threshold.fraction < 1.0)) {
      throw ConfigError("threshold_fraction", "must lie in [0, 1), got " +
                                                  std::to_string(*threshold.fraction));
    }
  } else if (threshold.count < 1) {
    throw ConfigError("threshold", "must be at least 1, got " + std::to_string(threshold.count));
  }
}

BackgroundHueSet::BackgroundHueSet(BinSet bins, bool achromatic_is_background, int tolerance)
    : bins_(bins), achromatic_(achromatic_is_background), tolerance_(tolerance) {
  if (tolerance < 0) {
    throw ConfigError("tolerance", "must be non-negative, got " + std::to_string(tolerance));
  }
  if (tolerance >= kHueBins / 2) {
    expanded_ = bins.any() ? BinSet().set() : BinSet();
    return;
  }
  for (int b = 0; b < kHueBins; ++b) {
    if (!bins[b]) continue;
    for (int d = -tolerance; d <= tolerance; ++d) {
      expanded_.set(static_cast<std::size_t>((b + d + kHueBins) % kHueBins));
    }
  }
}

std::vector<int> BackgroundHueSet::bin_list() const {
  std::vector<int> out;
  for (int b = 0; b < kHueBins; ++b) {
    if (bins_[b]) out.push_back(b);
  }
  return out;
}

BackgroundHueSet build_background_set(const HueField& field, const BorderSpec& spec,
                                      const Threshold& threshold, int tolerance) {
  validate_threshold(threshold);
  const BorderStrips strips = extract_borders(field, spec);
  BinSet bins;
  bool achromatic = false;
  for (const Strip* strip : strips.all()) {
    const HueHistogram hist = histogram(*strip);
    for (int b = 0; b < kHueBins; ++b) {
      if (threshold.exceeded(hist.counts(b), hist.total)) bins.set(b);
    }
    achromatic = achromatic || threshold.exceeded(hist.achromatic_count, hist.total);
  }
  return {bins, achromatic, tolerance};
}

}  // namespace hueseg
