#include "hueseg/colorspace.hpp"

#include <thread>
#include <vector>

namespace hueseg {
namespace {

void convert_rows(const RgbImage& img, HueField& field, Index row_begin, Index row_end) {
  for (Index y = row_begin; y < row_end; ++y) {
    for (Index x = 0; x < img.width(); ++x) {
      const auto px = rgb_to_hsi(img(x, y));
      field.bins(y, x) = static_cast<std::uint8_t>(hue_bin(px));
      field.achromatic(y, x) = px.achromatic;
    }
  }
}

}  // namespace

HueField to_hue_field(const RgbImage& img, unsigned threads) {
  HueField field{Plane<std::uint8_t>(img.height(), img.width()),
                 Plane<bool>(img.height(), img.width())};
  const Index rows = img.height();
  const Index workers = std::clamp<Index>(threads, 1, rows);
  if (workers == 1) {
    convert_rows(img, field, 0, rows);
    return field;
  }

  {
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (Index w = 0; w < workers; ++w) {
      const Index begin = rows * w / workers;
      const Index end = rows * (w + 1) / workers;
      pool.emplace_back([&img, &field, begin, end] { convert_rows(img, field, begin, end); });
    }
  }
  return field;
}

}  // namespace hueseg
