// Copyright 2026 The Panodepth Authors.
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

#include "panodepth/image_io.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

namespace panodepth {
namespace {

std::ofstream OpenOut(const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) Fail(ErrorCode::kIo, "cannot open for writing: " + path);
  return os;
}

std::ifstream OpenIn(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) Fail(ErrorCode::kIo, "cannot open for reading: " + path);
  return is;
}

// Reads the next whitespace-delimited header token, skipping comments.
std::string Token(std::istream& is, const std::string& path) {
  std::string tok;
  char ch;
  while (is.get(ch)) {
    if (ch == '#') {
      std::string skip;
      std::getline(is, skip);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(ch))) {
      if (!tok.empty()) return tok;
      continue;
    }
    tok.push_back(ch);
  }
  if (tok.empty()) Fail(ErrorCode::kIo, "truncated header: " + path);
  return tok;
}

int IntToken(std::istream& is, const std::string& path) {
  const std::string tok = Token(is, path);
  try {
    std::size_t used = 0;
    const int v = std::stoi(tok, &used);
    if (used != tok.size() || v <= 0) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    Fail(ErrorCode::kIo, "malformed header value '" + tok + "' in " + path);
  }
}

struct PnmHeader {
  std::string magic;
  int width = 0, height = 0, maxval = 0;
};

PnmHeader ReadPnmHeader(std::istream& is, const std::string& path) {
  PnmHeader h;
  h.magic = Token(is, path);
  if (h.magic != "P5" && h.magic != "P6")
    Fail(ErrorCode::kIo, "not a binary PGM/PPM: " + path);
  h.width = IntToken(is, path);
  h.height = IntToken(is, path);
  h.maxval = IntToken(is, path);
  if (h.maxval > 65535) Fail(ErrorCode::kIo, "bad maxval in " + path);
  return h;
}

void ReadExact(std::istream& is, char* dst, std::size_t n,
               const std::string& path) {
  is.read(dst, static_cast<std::streamsize>(n));
  if (static_cast<std::size_t>(is.gcount()) != n)
    Fail(ErrorCode::kIo, "truncated pixel data: " + path);
}

std::uint32_t ByteSwap(std::uint32_t v) {
  return ((v & 0xFFu) << 24) | ((v & 0xFF00u) << 8) | ((v >> 8) & 0xFF00u) |
         (v >> 24);
}

std::uint32_t ToLittleEndian(std::uint32_t v) {
  if constexpr (std::endian::native == std::endian::little) return v;
  return ByteSwap(v);
}

}  // namespace

void WritePnm8(const std::string& path, const ImageGrid& image) {
  Require(image.channels() == 1 || image.channels() == 3,
          "write_pnm8: need 1 or 3 channels");
  auto os = OpenOut(path);
  os << (image.channels() == 1 ? "P5" : "P6") << "\n"
     << image.width() << " " << image.height() << "\n255\n";
  std::vector<unsigned char> bytes(image.size());
  for (std::size_t i = 0; i < image.size(); ++i) {
    const double v = std::clamp(image.data()[i], 0.0, 1.0);
    bytes[i] = static_cast<unsigned char>(std::lround(v * 255.0));
  }
  os.write(reinterpret_cast<const char*>(bytes.data()),
           static_cast<std::streamsize>(bytes.size()));
  if (!os) Fail(ErrorCode::kIo, "write failed: " + path);
}

ImageGrid ReadPnm8(const std::string& path) {
  auto is = OpenIn(path);
  const PnmHeader h = ReadPnmHeader(is, path);
  if (h.maxval > 255) Fail(ErrorCode::kIo, "expected 8-bit image: " + path);
  const int channels = h.magic == "P6" ? 3 : 1;
  ImageGrid out(h.height, h.width, channels);
  std::vector<unsigned char> bytes(out.size());
  ReadExact(is, reinterpret_cast<char*>(bytes.data()), bytes.size(), path);
  for (std::size_t i = 0; i < bytes.size(); ++i)
    out.data()[i] = bytes[i] / static_cast<double>(h.maxval);
  return out;
}

void WritePgm16(const std::string& path, const LabelGrid& labels) {
  Require(labels.channels() == 1, "write_pgm16: need 1 channel");
  auto os = OpenOut(path);
  os << "P5\n" << labels.width() << " " << labels.height() << "\n65535\n";
  std::vector<unsigned char> bytes(2 * labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const std::int32_t v = labels.data()[i];
    Require(v >= 0 && v <= 65535, "write_pgm16: label out of 16-bit range");
    bytes[2 * i] = static_cast<unsigned char>(v >> 8);
    bytes[2 * i + 1] = static_cast<unsigned char>(v & 0xFF);
  }
  os.write(reinterpret_cast<const char*>(bytes.data()),
           static_cast<std::streamsize>(bytes.size()));
  if (!os) Fail(ErrorCode::kIo, "write failed: " + path);
}

LabelGrid ReadPgm16(const std::string& path) {
  auto is = OpenIn(path);
  const PnmHeader h = ReadPnmHeader(is, path);
  if (h.magic != "P5") Fail(ErrorCode::kIo, "expected PGM: " + path);
  LabelGrid out(h.height, h.width, 1, 0, GridRole::kLabel);
  if (h.maxval < 256) {
    std::vector<unsigned char> bytes(out.size());
    ReadExact(is, reinterpret_cast<char*>(bytes.data()), bytes.size(), path);
    for (std::size_t i = 0; i < bytes.size(); ++i) out.data()[i] = bytes[i];
    return out;
  }
  std::vector<unsigned char> bytes(2 * out.size());
  ReadExact(is, reinterpret_cast<char*>(bytes.data()), bytes.size(), path);
  for (std::size_t i = 0; i < out.size(); ++i)
    out.data()[i] = (bytes[2 * i] << 8) | bytes[2 * i + 1];
  return out;
}

void WritePfm(const std::string& path, const ImageGrid& grid) {
  const int in_ch = grid.channels();
  Require(in_ch >= 1 && in_ch <= 3, "write_pfm: need 1 to 3 channels");
  const int out_ch = in_ch == 1 ? 1 : 3;
  auto os = OpenOut(path);
  os << (out_ch == 1 ? "Pf" : "PF") << "\n"
     << grid.width() << " " << grid.height() << "\n-1.0\n";
  std::vector<std::uint32_t> words;
  words.reserve(grid.pixel_count() * out_ch);
  for (int r = grid.height() - 1; r >= 0; --r) {
    for (int c = 0; c < grid.width(); ++c) {
      for (int k = 0; k < out_ch; ++k) {
        const float v = k < in_ch ? static_cast<float>(grid(r, c, k)) : 0.0f;
        words.push_back(ToLittleEndian(std::bit_cast<std::uint32_t>(v)));
      }
    }
  }
  os.write(reinterpret_cast<const char*>(words.data()),
           static_cast<std::streamsize>(words.size() * 4));
  if (!os) Fail(ErrorCode::kIo, "write failed: " + path);
}

ImageGrid ReadPfm(const std::string& path) {
  auto is = OpenIn(path);
  const std::string magic = Token(is, path);
  if (magic != "Pf" && magic != "PF") Fail(ErrorCode::kIo, "not a PFM: " + path);
  const int channels = magic == "Pf" ? 1 : 3;
  const int width = IntToken(is, path);
  const int height = IntToken(is, path);
  double scale = 0.0;
  try {
    scale = std::stod(Token(is, path));
  } catch (const std::exception&) {
    Fail(ErrorCode::kIo, "malformed PFM scale in " + path);
  }
  if (scale == 0.0) Fail(ErrorCode::kIo, "malformed PFM scale in " + path);
  const bool little = scale < 0.0;

  ImageGrid out(height, width, channels);
  std::vector<std::uint32_t> words(out.size());
  ReadExact(is, reinterpret_cast<char*>(words.data()), words.size() * 4, path);
  std::size_t i = 0;
  for (int r = height - 1; r >= 0; --r) {
    for (int c = 0; c < width; ++c) {
      for (int k = 0; k < channels; ++k) {
        std::uint32_t w = words[i++];
        const bool native_little = std::endian::native == std::endian::little;
        if (little != native_little) w = ByteSwap(w);
        out(r, c, k) = std::bit_cast<float>(w);
      }
    }
  }
  return out;
}

ImageGrid ReadPfm2(const std::string& path) {
  const ImageGrid three = ReadPfm(path);
  if (three.channels() != 3)
    Fail(ErrorCode::kIo, "expected a 3-channel PFM for offsets: " + path);
  ImageGrid out(three.height(), three.width(), 2, 0.0, GridRole::kOffset);
  for (int r = 0; r < three.height(); ++r) {
    for (int c = 0; c < three.width(); ++c) {
      out(r, c, 0) = three(r, c, 0);
      out(r, c, 1) = three(r, c, 1);
    }
  }
  return out;
}

void WriteMask(const std::string& path, const ValidMask& mask) {
  ImageGrid image(mask.height(), mask.width());
  for (std::size_t i = 0; i < mask.size(); ++i)
    image.data()[i] = mask.data()[i] ? 1.0 : 0.0;
  WritePnm8(path, image);
}

ValidMask ReadMask(const std::string& path) {
  const ImageGrid image = ReadPnm8(path);
  ValidMask mask = MakeMask(image.height(), image.width(), false);
  for (std::size_t i = 0; i < mask.size(); ++i)
    mask.data()[i] = image.data()[i * image.channels()] > 0.5;
  return mask;
}

}  // namespace panodepth
