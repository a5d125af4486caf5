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

#ifndef PANODEPTH_GRID_H_
#define PANODEPTH_GRID_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "panodepth/error.h"

namespace panodepth {

enum class GridRole { kIntensity, kDepth, kHeatmap, kOffset, kMask, kLabel };

// Row-major H x W x C grid with value semantics. Element (row, col, ch) lives
// at index (row * width + col) * channels + ch.
template <typename T>
class Grid {
 public:
  Grid() = default;
  Grid(int height, int width, int channels = 1, T fill = T(),
       GridRole role = GridRole::kIntensity)
      : height_(height), width_(width), channels_(channels), role_(role) {
    Require(height >= 0 && width >= 0 && channels >= 1,
            "grid dimensions must be non-negative with at least one channel");
    data_.assign(static_cast<std::size_t>(height) * width * channels, fill);
  }

  int height() const { return height_; }
  int width() const { return width_; }
  int channels() const { return channels_; }
  GridRole role() const { return role_; }
  void set_role(GridRole role) { role_ = role; }

  std::size_t pixel_count() const {
    return static_cast<std::size_t>(height_) * width_;
  }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  bool Contains(int row, int col) const {
    return row >= 0 && row < height_ && col >= 0 && col < width_;
  }

  T& operator()(int row, int col, int ch = 0) {
    return data_[Index(row, col, ch)];
  }
  const T& operator()(int row, int col, int ch = 0) const {
    return data_[Index(row, col, ch)];
  }

  std::span<T> data() { return data_; }
  std::span<const T> data() const { return data_; }

  template <typename U>
  Grid<U> Cast() const {
    Grid<U> out(height_, width_, channels_, U(), role_);
    for (std::size_t i = 0; i < data_.size(); ++i) {
      out.data()[i] = static_cast<U>(data_[i]);
    }
    return out;
  }

  template <typename U>
  bool SameShape(const Grid<U>& other, bool check_channels = true) const {
    return height_ == other.height() && width_ == other.width() &&
           (!check_channels || channels_ == other.channels());
  }

 private:
  std::size_t Index(int row, int col, int ch) const {
    return (static_cast<std::size_t>(row) * width_ + col) * channels_ + ch;
  }

  int height_ = 0;
  int width_ = 0;
  int channels_ = 1;
  GridRole role_ = GridRole::kIntensity;
  std::vector<T> data_;
};

using ImageGrid = Grid<double>;
using LabelGrid = Grid<std::int32_t>;

// Set bits mark valid pixels.
using ValidMask = Grid<std::uint8_t>;

inline ValidMask MakeMask(int height, int width, bool value) {
  return ValidMask(height, width, 1, value ? 1 : 0, GridRole::kMask);
}

inline std::size_t CountSet(const ValidMask& mask) {
  std::size_t n = 0;
  for (auto v : mask.data()) n += v != 0;
  return n;
}

template <typename T, typename U>
void RequireSameShape(const Grid<T>& a, const Grid<U>& b,
                      const std::string& what, bool check_channels = true) {
  Require(a.SameShape(b, check_channels), "shape mismatch: " + what);
}

}  // namespace panodepth

#endif  // PANODEPTH_GRID_H_
