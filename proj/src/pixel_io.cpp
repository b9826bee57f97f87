// Copyright 2026 The Microshift Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "microshift/pixel_io.hpp"

#include <cctype>
#include <fstream>
#include <iterator>
#include <sstream>

namespace microshift {

MultiPlaneImage MultiPlaneImage::gray(ImagePlane plane) {
  MultiPlaneImage img;
  img.kind = ImageKind::kGray;
  img.planes.push_back(std::move(plane));
  return img;
}

MultiPlaneImage MultiPlaneImage::rgb(ImagePlane r, ImagePlane g, ImagePlane b) {
  MultiPlaneImage img;
  img.kind = ImageKind::kRgb;
  img.planes.push_back(std::move(r));
  img.planes.push_back(std::move(g));
  img.planes.push_back(std::move(b));
  return img;
}

void validate(const MultiPlaneImage& img) {
  const std::size_t expected = img.kind == ImageKind::kGray ? 1 : 3;
  if (img.planes.size() != expected) {
    throw std::invalid_argument("plane count does not match image kind");
  }
  for (const auto& p : img.planes) {
    if (p.rows() != img.planes.front().rows() || p.cols() != img.planes.front().cols()) {
      throw std::invalid_argument("planes differ in size");
    }
  }
  if (img.width() < 1 || img.height() < 1 || img.width() > kMaxDimension ||
      img.height() > kMaxDimension) {
    throw std::invalid_argument("image dimensions out of range");
  }
}

namespace {

class HeaderReader {
 public:
  explicit HeaderReader(const std::string& bytes) : bytes_(bytes) {}

  int next_int(const char* field) {
    skip_space_and_comments();
    std::size_t start = pos_;
    long value = 0;
    while (pos_ < bytes_.size() && std::isdigit(static_cast<unsigned char>(bytes_[pos_]))) {
      value = value * 10 + (bytes_[pos_] - '0');
      if (value > 1 << 20) {
        throw ParseError(ParseError::Kind::kBadHeader, std::string("header value too large: ") + field);
      }
      ++pos_;
    }
    if (pos_ == start) {
      throw ParseError(ParseError::Kind::kBadHeader, std::string("missing header field: ") + field);
    }
    return static_cast<int>(value);
  }

  // Exactly one whitespace byte separates maxval from the raster.
  std::size_t raster_start() {
    if (pos_ >= bytes_.size() || !std::isspace(static_cast<unsigned char>(bytes_[pos_]))) {
      throw ParseError(ParseError::Kind::kBadHeader, "expected whitespace after maxval");
    }
    return pos_ + 1;
  }

 private:
  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      const char c = bytes_[pos_];
      if (c == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  const std::string& bytes_;
  std::size_t pos_ = 2;
};

}  // namespace

MultiPlaneImage parse_image(const std::string& bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '5' && bytes[1] != '6')) {
    throw ParseError(ParseError::Kind::kBadMagic, "not a binary PGM/PPM file");
  }
  const bool color = bytes[1] == '6';
  HeaderReader header(bytes);
  const int width = header.next_int("width");
  const int height = header.next_int("height");
  const int maxval = header.next_int("maxval");
  if (width < 1 || height < 1 || width > kMaxDimension || height > kMaxDimension) {
    throw ParseError(ParseError::Kind::kBadHeader, "image dimensions out of range");
  }
  if (maxval != 255) {
    throw ParseError(ParseError::Kind::kUnsupportedMaxval,
                     "unsupported maxval " + std::to_string(maxval));
  }
  const std::size_t start = header.raster_start();
  const std::size_t channels = color ? 3 : 1;
  const std::size_t count = static_cast<std::size_t>(width) * height;
  if (bytes.size() < start + count * channels) {
    throw ParseError(ParseError::Kind::kTruncated, "truncated raster payload");
  }

  std::vector<ImagePlane> planes(channels, ImagePlane(height, width));
  const auto* raster = reinterpret_cast<const std::uint8_t*>(bytes.data() + start);
  for (std::size_t i = 0; i < count; ++i) {
    for (std::size_t ch = 0; ch < channels; ++ch) {
      planes[ch].data()[i] = raster[i * channels + ch];
    }
  }
  if (!color) return MultiPlaneImage::gray(std::move(planes[0]));
  return MultiPlaneImage::rgb(std::move(planes[0]), std::move(planes[1]), std::move(planes[2]));
}

MultiPlaneImage read_image(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_image(bytes);
}

std::string serialize_image(const MultiPlaneImage& img) {
  validate(img);
  const bool color = img.kind == ImageKind::kRgb;
  std::ostringstream header;
  header << (color ? "P6" : "P5") << '\n' << img.width() << ' ' << img.height() << '\n' << 255 << '\n';
  std::string out = header.str();
  const std::size_t count = static_cast<std::size_t>(img.width()) * img.height();
  const std::size_t channels = img.planes.size();
  const std::size_t base = out.size();
  out.resize(base + count * channels);
  for (std::size_t i = 0; i < count; ++i) {
    for (std::size_t ch = 0; ch < channels; ++ch) {
      out[base + i * channels + ch] = static_cast<char>(img.planes[ch].data()[i]);
    }
  }
  return out;
}

void write_image(const MultiPlaneImage& img, const std::filesystem::path& path) {
  const std::string bytes = serialize_image(img);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace microshift
