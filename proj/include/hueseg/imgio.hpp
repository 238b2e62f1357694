#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "hueseg/image.hpp"

namespace hueseg {

using Bytes = std::vector<std::uint8_t>;

/// Decode a binary P6 PPM (maxval 255). Header comments are accepted.
/// Throws DecodeError on a malformed header, maxval != 255, or a payload
/// whose length differs from 3*w*h.
RgbImage read_ppm(std::span<const std::uint8_t> bytes);

/// Canonical P6: "P6\n<w> <h>\n255\n" + payload.
Bytes write_ppm(const RgbImage& img);

/// Decode a binary P5 PGM (maxval 255) into its gray values.
GrayImage read_pgm(std::span<const std::uint8_t> bytes);

Bytes write_pgm(const GrayImage& img);

/// P5 PGM to mask: values > 127 are foreground.
SegMask read_mask(std::span<const std::uint8_t> bytes);

/// Mask to P5 PGM: foreground 255, background 0.
Bytes write_mask(const SegMask& mask);

// File helpers. Throw std::system_error on I/O failure.
Bytes read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

}  // namespace hueseg
