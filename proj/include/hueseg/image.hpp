#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <span>
#include <string>

#include "hueseg/errors.hpp"

namespace hueseg {

using Index = Eigen::Index;

/// Row-major 2-D raster; rows() is the image height, cols() the width.
template <typename T>
using Plane = Eigen::Array<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

using GrayImage = Plane<std::uint8_t>;

/// Binary foreground mask: true = foreground.
using SegMask = Plane<bool>;

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  friend bool operator==(const Rgb&, const Rgb&) = default;
};

/// 8-bit RGB raster. Pixels are stored interleaved, row-major, top-to-bottom,
/// which is also the PPM payload layout.
class RgbImage {
 public:
  using Pixels = Eigen::Array<std::uint8_t, Eigen::Dynamic, 3, Eigen::RowMajor>;

  RgbImage() = default;

  RgbImage(Index width, Index height, Rgb fill = {}) : width_(width), height_(height) {
    if (width < 1 || height < 1) {
      throw DimensionError("image dimensions must be at least 1x1, got " +
                           std::to_string(width) + "x" + std::to_string(height));
    }
    pixels_.resize(width * height, 3);
    pixels_.col(0).setConstant(fill.r);
    pixels_.col(1).setConstant(fill.g);
    pixels_.col(2).setConstant(fill.b);
  }

  Index width() const noexcept { return width_; }
  Index height() const noexcept { return height_; }
  Index size() const noexcept { return width_ * height_; }

  Rgb operator()(Index x, Index y) const {
    auto p = pixels_.row(y * width_ + x);
    return {p(0), p(1), p(2)};
  }

  void set(Index x, Index y, Rgb c) {
    auto p = pixels_.row(y * width_ + x);
    p(0) = c.r;
    p(1) = c.g;
    p(2) = c.b;
  }

  const Pixels& pixels() const noexcept { return pixels_; }

  std::span<const std::uint8_t> bytes() const noexcept {
    return {pixels_.data(), static_cast<std::size_t>(pixels_.size())};
  }
  std::span<std::uint8_t> bytes() noexcept {
    return {pixels_.data(), static_cast<std::size_t>(pixels_.size())};
  }

  /// Channel c (0=R, 1=G, 2=B) as a height x width plane.
  Plane<std::uint8_t> channel(int c) const {
    return Eigen::Map<const Plane<std::uint8_t>, 0, Eigen::InnerStride<3>>(
        pixels_.data() + c, height_, width_);
  }

  friend bool operator==(const RgbImage& a, const RgbImage& b) {
    return a.width_ == b.width_ && a.height_ == b.height_ &&
           (a.pixels_ == b.pixels_).all();
  }

 private:
  Index width_ = 0;
  Index height_ = 0;
  Pixels pixels_;
};

template <typename A, typename B>
void require_same_shape(const Eigen::DenseBase<A>& a, const Eigen::DenseBase<B>& b,
                        const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError(std::string(what) + ": dimension mismatch (" +
                         std::to_string(a.cols()) + "x" + std::to_string(a.rows()) + " vs " +
                         std::to_string(b.cols()) + "x" + std::to_string(b.rows()) + ")");
  }
}

}  // namespace hueseg
