#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <numbers>
#include <numeric>

#include "hueseg/image.hpp"

namespace hueseg {

/// Number of hue bins. Fixed; not a configuration knob.
inline constexpr int kHueBins = 256;

template <typename Scalar = double>
struct HsiPixel {
  Scalar hue_deg = 0;     // [0, 360)
  Scalar saturation = 0;  // [0, 1]
  Scalar intensity = 0;   // [0, 255]
  bool achromatic = true;
};

/// Gonzalez-Woods HSI. Achromatic pixels (R == G == B) get hue 0 and
/// saturation 0.
///
/// Hue depends only on the channel differences; they are reduced by their
/// gcd before the floating-point evaluation, so inputs that are integer
/// multiples of each other produce bit-identical hue.
template <typename Scalar = double>
HsiPixel<Scalar> rgb_to_hsi(int r, int g, int b) {
  HsiPixel<Scalar> out;
  const int sum = r + g + b;
  out.intensity = static_cast<Scalar>(sum) / Scalar(3);
  if (r == g && g == b) return out;

  out.achromatic = false;
  out.saturation = Scalar(1) - Scalar(3) * static_cast<Scalar>(std::min({r, g, b})) /
                                   static_cast<Scalar>(sum);

  int rg = r - g;
  int rb = r - b;
  const int common = std::gcd(std::abs(rg), std::abs(rb));
  rg /= common;
  rb /= common;
  const int gb = rb - rg;

  const Scalar num = Scalar(0.5) * static_cast<Scalar>(rg + rb);
  const Scalar den = std::sqrt(static_cast<Scalar>(rg * rg + rb * gb));
  const Scalar cosine = std::clamp(num / den, Scalar(-1), Scalar(1));
  // Dividing by pi before scaling keeps 0, 90 and 180 degrees exact.
  const Scalar theta = std::acos(cosine) / std::numbers::pi_v<Scalar> * Scalar(180);

  out.hue_deg = (b <= g) ? theta : Scalar(360) - theta;
  if (out.hue_deg >= Scalar(360)) out.hue_deg -= Scalar(360);
  return out;
}

template <typename Scalar = double>
HsiPixel<Scalar> rgb_to_hsi(Rgb c) {
  return rgb_to_hsi<Scalar>(c.r, c.g, c.b);
}

/// floor(hue * 256 / 360), clamped to [0, 255]; achromatic pixels map to 0.
template <typename Scalar>
int hue_bin(Scalar hue_deg) {
  const Scalar pos = std::floor(hue_deg * Scalar(kHueBins) / Scalar(360));
  return static_cast<int>(std::clamp(pos, Scalar(0), Scalar(kHueBins - 1)));
}

template <typename Scalar>
int hue_bin(const HsiPixel<Scalar>& px) {
  return px.achromatic ? 0 : hue_bin(px.hue_deg);
}

/// Per-pixel hue bins and achromatic flags of an image.
struct HueField {
  Plane<std::uint8_t> bins;
  Plane<bool> achromatic;

  Index width() const noexcept { return bins.cols(); }
  Index height() const noexcept { return bins.rows(); }
};

/// Rows are split across `threads` workers (1 = serial). The result does not
/// depend on the worker count.
HueField to_hue_field(const RgbImage& img, unsigned threads = 1);

}  // namespace hueseg
