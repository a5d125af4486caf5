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

// Netpbm and PFM image I/O.
//
//  - 8-bit PGM (P5) / PPM (P6): intensities in [0, 1] scaled to 0..255.
//  - 16-bit PGM (P5, maxval 65535, big-endian): label grids.
//  - PFM: little-endian float32, bottom row first; "Pf" for 1 channel and
//    "PF" for 3. Two-channel grids are written as PF with a zero third
//    channel and read back with ReadPfm2.

#ifndef PANODEPTH_IMAGE_IO_H_
#define PANODEPTH_IMAGE_IO_H_

#include <string>

#include "panodepth/grid.h"

namespace panodepth {

void WritePnm8(const std::string& path, const ImageGrid& image);
ImageGrid ReadPnm8(const std::string& path);

void WritePgm16(const std::string& path, const LabelGrid& labels);
LabelGrid ReadPgm16(const std::string& path);

void WritePfm(const std::string& path, const ImageGrid& grid);
ImageGrid ReadPfm(const std::string& path);
ImageGrid ReadPfm2(const std::string& path);

// Set bits as 255 in an 8-bit PGM and back.
void WriteMask(const std::string& path, const ValidMask& mask);
ValidMask ReadMask(const std::string& path);

}  // namespace panodepth

#endif  // PANODEPTH_IMAGE_IO_H_
