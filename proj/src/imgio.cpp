#include "hueseg/imgio.hpp"

#include <cerrno>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>
#include <system_error>

namespace hueseg {
namespace {

struct PnmHeader {
  Index width = 0;
  Index height = 0;
  std::size_t payload_offset = 0;
};

class HeaderReader {
 public:
  explicit HeaderReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  void expect_magic(char kind) {
    if (bytes_.size() < 2 || bytes_[0] != 'P' || bytes_[1] != static_cast<std::uint8_t>(kind)) {
      throw DecodeError(std::string("expected magic number P") + kind, 0);
    }
    pos_ = 2;
  }

  // Whitespace and '#' comments between header tokens.
  void skip_separators() {
    bool any = false;
    while (pos_ < bytes_.size()) {
      const auto c = bytes_[pos_];
      if (c == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n' && bytes_[pos_] != '\r') ++pos_;
        any = true;
      } else if (is_space(c)) {
        ++pos_;
        any = true;
      } else {
        break;
      }
    }
    if (!any) throw DecodeError("expected whitespace in header", pos_);
  }

  Index read_uint(const char* what) {
    const std::size_t start = pos_;
    Index value = 0;
    while (pos_ < bytes_.size() && bytes_[pos_] >= '0' && bytes_[pos_] <= '9') {
      value = value * 10 + (bytes_[pos_] - '0');
      if (value > (Index{1} << 30)) throw DecodeError(std::string(what) + " too large", start);
      ++pos_;
    }
    if (pos_ == start) throw DecodeError(std::string("expected ") + what, start);
    return value;
  }

  // Exactly one whitespace byte separates maxval from the payload.
  void single_space() {
    if (pos_ >= bytes_.size() || !is_space(bytes_[pos_])) {
      throw DecodeError("expected single whitespace after maxval", pos_);
    }
    ++pos_;
  }

  std::size_t pos() const noexcept { return pos_; }

 private:
  static bool is_space(std::uint8_t c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
  }

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

PnmHeader parse_header(std::span<const std::uint8_t> bytes, char kind, std::size_t channels) {
  HeaderReader in(bytes);
  in.expect_magic(kind);
  in.skip_separators();
  const std::size_t width_at = in.pos();
  const Index width = in.read_uint("width");
  in.skip_separators();
  const Index height = in.read_uint("height");
  if (width < 1 || height < 1) throw DecodeError("image dimensions must be positive", width_at);
  in.skip_separators();
  const std::size_t maxval_at = in.pos();
  const Index maxval = in.read_uint("maxval");
  if (maxval != 255) {
    throw DecodeError("unsupported maxval " + std::to_string(maxval) + ", expected 255", maxval_at);
  }
  in.single_space();

  PnmHeader h{width, height, in.pos()};
  const std::size_t expected = static_cast<std::size_t>(width * height) * channels;
  const std::size_t actual = bytes.size() - h.payload_offset;
  if (actual < expected) {
    throw DecodeError("truncated payload: expected " + std::to_string(expected) +
                          " bytes, got " + std::to_string(actual),
                      bytes.size());
  }
  if (actual > expected) {
    throw DecodeError("trailing data after payload: expected " + std::to_string(expected) +
                          " bytes, got " + std::to_string(actual),
                      h.payload_offset + expected);
  }
  return h;
}

Bytes header_bytes(char kind, Index width, Index height) {
  const std::string header = std::string("P") + kind + "\n" + std::to_string(width) + " " +
                             std::to_string(height) + "\n255\n";
  return Bytes(header.begin(), header.end());
}

}  // namespace

RgbImage read_ppm(std::span<const std::uint8_t> bytes) {
  const PnmHeader h = parse_header(bytes, '6', 3);
  RgbImage img(h.width, h.height);
  const auto payload = bytes.subspan(h.payload_offset);
  std::memcpy(img.bytes().data(), payload.data(), payload.size());
  return img;
}

Bytes write_ppm(const RgbImage& img) {
  Bytes out = header_bytes('6', img.width(), img.height());
  const auto payload = img.bytes();
  out.insert(out.end(), payload.begin(), payload.end());
  return out;
}

GrayImage read_pgm(std::span<const std::uint8_t> bytes) {
  const PnmHeader h = parse_header(bytes, '5', 1);
  GrayImage img(h.height, h.width);
  const auto payload = bytes.subspan(h.payload_offset);
  std::memcpy(img.data(), payload.data(), payload.size());
  return img;
}

Bytes write_pgm(const GrayImage& img) {
  Bytes out = header_bytes('5', img.cols(), img.rows());
  out.insert(out.end(), img.data(), img.data() + img.size());
  return out;
}

SegMask read_mask(std::span<const std::uint8_t> bytes) {
  return read_pgm(bytes) > std::uint8_t{127};
}

Bytes write_mask(const SegMask& mask) {
  const GrayImage gray = mask.select(GrayImage::Constant(mask.rows(), mask.cols(), 255),
                                     GrayImage::Zero(mask.rows(), mask.cols()));
  return write_pgm(gray);
}

Bytes read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::system_error(errno ? errno : ENOENT, std::generic_category(),
                            "cannot open " + path.string());
  }
  Bytes data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) {
    throw std::system_error(EIO, std::generic_category(), "cannot read " + path.string());
  }
  return data;
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::system_error(errno ? errno : EACCES, std::generic_category(),
                            "cannot open " + path.string() + " for writing");
  }
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) {
    throw std::system_error(EIO, std::generic_category(), "cannot write " + path.string());
  }
}

}  // namespace hueseg
