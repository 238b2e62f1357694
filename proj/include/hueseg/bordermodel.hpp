#pragma once

#include <array>
#include <bitset>
#include <cstdint>
#include <optional>
#include <vector>

#include "hueseg/colorspace.hpp"

namespace hueseg {

/// Default absolute per-bin count a border bin must exceed to count as
/// background.
inline constexpr std::int64_t kDefaultThreshold = 5;

struct BorderSpec {
  Index thickness = 1;
};

/// max(1, round(0.02 * min(width, height))); 5 px for a 256x256 image.
BorderSpec default_border(Index width, Index height);

/// Throws ConfigError("border") unless 1 <= t and 2t < min(width, height).
void validate_border(const BorderSpec& spec, Index width, Index height);

/// Hue bins and achromatic flags of one border strip.
struct Strip {
  Plane<std::uint8_t> bins;
  Plane<bool> achromatic;

  Index size() const noexcept { return bins.size(); }
};

/// Four disjoint strips. Left and right exclude the rows already covered by
/// top and bottom.
struct BorderStrips {
  Strip top;
  Strip bottom;
  Strip left;
  Strip right;

  std::array<const Strip*, 4> all() const { return {&top, &bottom, &left, &right}; }
};

BorderStrips extract_borders(const HueField& field, const BorderSpec& spec);

struct HueHistogram {
  Eigen::Array<std::int64_t, kHueBins, 1> counts = Eigen::Array<std::int64_t, kHueBins, 1>::Zero();
  std::int64_t achromatic_count = 0;
  std::int64_t total = 0;
};

HueHistogram histogram(const Strip& strip);

using BinSet = std::bitset<kHueBins>;

/// Bins whose count is strictly above `threshold` (threshold >= 1).
BinSet threshold_bins(const HueHistogram& hist, std::int64_t threshold);

/// Relative mode: bins whose count is strictly above fraction * total.
BinSet threshold_bins_relative(const HueHistogram& hist, double fraction);

/// Either an absolute count (default 5) or, when `fraction` is set, a
/// fraction of each strip's pixel count.
struct Threshold {
  std::int64_t count = kDefaultThreshold;
  std::optional<double> fraction;

  bool exceeded(std::int64_t value, std::int64_t strip_total) const {
    return fraction ? static_cast<double>(value) > *fraction * static_cast<double>(strip_total)
                    : value > count;
  }
};

void validate_threshold(const Threshold& threshold);

class BackgroundHueSet {
 public:
  BackgroundHueSet() = default;
  BackgroundHueSet(BinSet bins, bool achromatic_is_background, int tolerance);

  const BinSet& bins() const noexcept { return bins_; }
  bool achromatic_is_background() const noexcept { return achromatic_; }
  int tolerance() const noexcept { return tolerance_; }

  /// True when some member lies within `tolerance` bins of `bin` on the
  /// circular 256-bin wheel.
  bool matches(int bin) const { return expanded_[static_cast<std::size_t>(bin)]; }

  std::vector<int> bin_list() const;

 private:
  BinSet bins_;
  BinSet expanded_;
  bool achromatic_ = false;
  int tolerance_ = 0;
};

/// Union of the per-edge thresholded bins. Achromatic counts as background
/// when any edge's achromatic count exceeds the threshold.
BackgroundHueSet build_background_set(const HueField& field, const BorderSpec& spec,
                                      const Threshold& threshold, int tolerance);

}  // namespace hueseg
