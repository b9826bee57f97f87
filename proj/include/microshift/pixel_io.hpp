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

#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include "microshift/image.hpp"

namespace microshift {

class ParseError : public std::runtime_error {
 public:
  enum class Kind { kBadMagic, kBadHeader, kUnsupportedMaxval, kTruncated };

  ParseError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Binary PGM (P5) or PPM (P6) with maxval 255. PPM is split into R, G, B planes.
MultiPlaneImage read_image(const std::filesystem::path& path);
MultiPlaneImage parse_image(const std::string& bytes);

void write_image(const MultiPlaneImage& img, const std::filesystem::path& path);
std::string serialize_image(const MultiPlaneImage& img);

}  // namespace microshift
