// Copyright 2026 The freqgen Authors.
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

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "freqgen/error.hpp"
#include "freqgen/raster.hpp"

namespace freqgen {
namespace {

std::vector<unsigned char> slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failed on '" + path.string() + "'");
  return bytes;
}

Image from_bytes(std::size_t h, std::size_t w, std::size_t c, const unsigned char* p) {
  std::vector<double> data(h * w * c);
  for (std::size_t i = 0; i < data.size(); ++i) data[i] = dequantize(p[i]);
  return Image(h, w, c, std::move(data));
}

std::vector<unsigned char> to_bytes(const Image& img) {
  std::vector<unsigned char> out(img.data().size());
  std::transform(img.data().begin(), img.data().end(), out.begin(), quantize);
  return out;
}

Image decode_png(const std::vector<unsigned char>& bytes, const std::string& name) {
  png_image png;
  std::memset(&png, 0, sizeof(png));
  png.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&png, bytes.data(), bytes.size())) {
    throw DecodeError("'" + name + "': " + png.message);
  }
  if (png.format & PNG_FORMAT_FLAG_LINEAR) {
    png_image_free(&png);
    throw UnsupportedFormat("'" + name + "': only 8-bit PNG is supported");
  }
  const bool color = (png.format & PNG_FORMAT_FLAG_COLOR) != 0;
  png.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  std::vector<unsigned char> pixels(PNG_IMAGE_SIZE(png));
  if (!png_image_finish_read(&png, nullptr, pixels.data(), 0, nullptr)) {
    const std::string msg = png.message;
    png_image_free(&png);
    throw DecodeError("'" + name + "': " + msg);
  }
  return from_bytes(png.height, png.width, color ? 3 : 1, pixels.data());
}

// Binary PGM/PPM reader. Header tokens may be separated by whitespace and
// '#' comments; exactly one whitespace byte precedes the raster.
Image decode_pnm(const std::vector<unsigned char>& bytes, const std::string& name) {
  std::size_t pos = 2;
  auto next_int = [&]() -> long {
    for (;;) {
      while (pos < bytes.size() && std::isspace(bytes[pos])) ++pos;
      if (pos < bytes.size() && bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
        continue;
      }
      break;
    }
    if (pos >= bytes.size() || !std::isdigit(bytes[pos])) {
      throw DecodeError("'" + name + "': malformed PNM header");
    }
    long v = 0;
    while (pos < bytes.size() && std::isdigit(bytes[pos])) {
      v = v * 10 + (bytes[pos++] - '0');
      if (v > 1'000'000'000L) throw DecodeError("'" + name + "': PNM header value too large");
    }
    return v;
  };
  const std::size_t channels = bytes[1] == '6' ? 3 : 1;
  const long w = next_int();
  const long h = next_int();
  const long maxval = next_int();
  if (w <= 0 || h <= 0) throw DecodeError("'" + name + "': empty PNM raster");
  if (maxval != 255) {
    throw UnsupportedFormat("'" + name + "': PNM maxval " + std::to_string(maxval) +
                            " (only 255 is supported)");
  }
  if (pos >= bytes.size() || !std::isspace(bytes[pos])) {
    throw DecodeError("'" + name + "': malformed PNM header");
  }
  ++pos;
  const std::size_t need = static_cast<std::size_t>(w) * static_cast<std::size_t>(h) * channels;
  if (bytes.size() - pos < need) throw DecodeError("'" + name + "': truncated PNM raster");
  return from_bytes(static_cast<std::size_t>(h), static_cast<std::size_t>(w), channels,
                    bytes.data() + pos);
}

std::string lower_extension(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext;
}

void write_all(const std::filesystem::path& path, const void* data, std::size_t size) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(static_cast<const char*>(data), static_cast<std::streamsize>(size));
  out.flush();
  if (!out) throw IoError("write failed on '" + path.string() + "'");
}

}  // namespace

Image read_image(const std::filesystem::path& path) {
  const auto bytes = slurp(path);
  const std::string name = path.string();
  static constexpr unsigned char kPngSig[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1A, '\n'};
  if (bytes.size() >= 8 && std::memcmp(bytes.data(), kPngSig, 8) == 0) {
    return decode_png(bytes, name);
  }
  if (bytes.size() >= 2 && bytes[0] == 'P') {
    if (bytes[1] == '5' || bytes[1] == '6') return decode_pnm(bytes, name);
    if (bytes[1] >= '1' && bytes[1] <= '4') {
      throw UnsupportedFormat("'" + name + "': only binary P5/P6 anymaps are supported");
    }
  }
  throw DecodeError("'" + name + "': unrecognized image format");
}

void write_image(const Image& img, const std::filesystem::path& path) {
  if (img.empty()) throw InvalidInput("write_image: empty image");
  const std::string ext = lower_extension(path);
  const auto bytes = to_bytes(img);
  if (ext == ".png") {
    png_image png;
    std::memset(&png, 0, sizeof(png));
    png.version = PNG_IMAGE_VERSION;
    png.width = static_cast<png_uint_32>(img.width());
    png.height = static_cast<png_uint_32>(img.height());
    png.format = img.channels() == 3 ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
    png_alloc_size_t size = 0;
    if (!png_image_write_get_memory_size(png, size, 0, bytes.data(), 0, nullptr)) {
      throw IoError("'" + path.string() + "': " + png.message);
    }
    std::vector<unsigned char> encoded(size);
    if (!png_image_write_to_memory(&png, encoded.data(), &size, 0, bytes.data(), 0, nullptr)) {
      throw IoError("'" + path.string() + "': " + png.message);
    }
    write_all(path, encoded.data(), size);
    return;
  }
  if (ext == ".ppm" || ext == ".pgm") {
    const bool want_color = ext == ".ppm";
    if (want_color != (img.channels() == 3)) {
      throw InvalidInput("write_image: " + ext + " needs " + (want_color ? "3" : "1") +
                         "-channel data");
    }
    std::string header = std::string(want_color ? "P6" : "P5") + "\n" +
                         std::to_string(img.width()) + " " + std::to_string(img.height()) +
                         "\n255\n";
    std::vector<unsigned char> out(header.begin(), header.end());
    out.insert(out.end(), bytes.begin(), bytes.end());
    write_all(path, out.data(), out.size());
    return;
  }
  throw UnsupportedFormat("write_image: unsupported extension '" + ext + "'");
}

}  // namespace freqgen
